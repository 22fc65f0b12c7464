#pragma once

// Admissible triplets (g, zeta, q), the Taylor morphisms phi and psi at q, and
// good basic invariants x^alpha = psi^{-1}(z^alpha).
//
// Polynomials in the basic invariants are MultiPolys in n variables X_1..X_n
// carrying the weights d; their images live in the z-coordinate ring with the
// same weights.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "refrob/groups.hpp"
#include "refrob/report.hpp"

namespace refrob {

class TripletError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdmissibleTriplet {
  GroupPtr group;
  Matrix g;
  CycScalar zeta;
  Vector q;
  EigenFrame frame;
};

/// Validates eagerly; throws TripletError with the failing clauses.
AdmissibleTriplet make_triplet(GroupPtr group, const Matrix& g, const CycScalar& zeta,
                               const std::optional<Vector>& q = std::nullopt);
/// Coxeter element, zeta_h and its normalized eigenvector.
AdmissibleTriplet standard_triplet(GroupPtr group);

/// Clauses "eigenvector" (g q = zeta q, zeta a primitive d_n-th root),
/// "regular" (Jacobian of invs in root coordinates invertible at q) and
/// "spectrum" (g has eigenvalues zeta^{1 - d_alpha}).
Report check_admissible(const ReflectionGroup& group, const Matrix& g, const CycScalar& zeta, const Vector& q,
                        const std::vector<MultiPoly>& invs);

struct Conjugate {
  std::vector<int> word;  // h = s_{w_1} ... s_{w_k}, 0-based generator indices
};
struct Scale {
  CycScalar s;
};
struct Power {
  int r;
};
using TripletAction = std::variant<Conjugate, Scale, Power>;

/// (h g h^{-1}, zeta, h q), (g, zeta, s q) or (g^r, zeta^r, q).
AdmissibleTriplet transform_triplet(const AdmissibleTriplet& t, const TripletAction& action);

/// Truncated Taylor data of a set of invariants at q: the shifted invariants
/// s_alpha(z) = x^alpha(z + q) - x^alpha(q) and memoized products s^a, all
/// with terms of weight above max_weight dropped.
class TaylorExpansion {
 public:
  TaylorExpansion(const AdmissibleTriplet& t, std::vector<MultiPoly> invariants_z, int max_weight);

  int max_weight() const { return max_weight_; }
  const WeightVec& weights() const { return d_; }
  const Vector& values_at_q() const { return values_; }
  /// s^a truncated at max_weight; requires d . a <= max_weight.
  const MultiPoly& shifted_power(const ExpVec& a);
  /// Weight-(d . a) part of s^a, i.e. psi(X^a).
  MultiPoly psi_monomial(const ExpVec& a);

 private:
  WeightVec d_;
  int max_weight_;
  int n_;
  Vector values_;
  std::vector<MultiPoly> shifted_;
  std::map<std::uint64_t, MultiPoly> powers_;
};

/// phi(f) = f(s_1, ..., s_n) with s_alpha = x^alpha(z + q) - x^alpha(q).
MultiPoly phi(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, const MultiPoly& f);
/// Uses the group's initial invariants.
MultiPoly phi(const AdmissibleTriplet& t, const MultiPoly& f);

/// Weight-j part of phi(f) for f weighted-homogeneous of weight j in X.
MultiPoly psi(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, const MultiPoly& f);
MultiPoly psi(const AdmissibleTriplet& t, const MultiPoly& f);

/// Matrix of psi on weight j: column a is psi(X^a) over the basis z^b, both
/// indexed by monomials_of_weight(n, d, j).
Matrix psi_matrix(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, int j);
Matrix psi_matrix(const AdmissibleTriplet& t, int j);

struct GoodBasis {
  AdmissibleTriplet triplet;
  std::vector<MultiPoly> invariants;       // x^alpha in z coordinates
  std::vector<MultiPoly> root_invariants;  // x^alpha in root coordinates
  std::vector<MultiPoly> in_initial;       // x^alpha as a polynomial in the initial invariants
  Vector values_at_q;                      // x^alpha(q)
};

/// Solves psi_matrix(d_alpha) c = z^alpha for each alpha. Throws TripletError
/// when a psi matrix is singular.
GoodBasis good_basic_invariants(const AdmissibleTriplet& t);
GoodBasis good_basic_invariants(const AdmissibleTriplet& t, const std::vector<MultiPoly>& initial_root);

/// Verifies, for every a with d . a <= max_weight (default 2 d_n):
/// "goodness" (no z^b with |b| >= 2 in the weight-d_alpha part of x^alpha at q),
/// "compatibility" (dx^alpha/dz^beta (q) = delta), "delta" (psi(X^a) = z^a),
/// "congruence" (Taylor coefficients of (x - x(q))^a vanish off weights
/// d . a mod d_n) and "values_at_q" (x^alpha(q) = 0 below d_n, x^n(q) != 0).
Report check_good(const GoodBasis& basis, std::optional<int> max_weight = std::nullopt);

/// True iff the good bases of both triplets span the same space in every weight.
bool equivalent_triplets(const AdmissibleTriplet& t1, const AdmissibleTriplet& t2);
bool same_good_span(const GoodBasis& b1, const GoodBasis& b2);

}  // namespace refrob
