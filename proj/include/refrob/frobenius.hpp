#pragma once

// Frobenius structure on the orbit space in flat coordinates x^1..x^n (a good
// basis). Polynomials here are in the X ring with weights d; indices are
// 0-based and alpha* = n - 1 - alpha.

#include <map>
#include <stdexcept>
#include <vector>

#include "refrob/goodbasis.hpp"
#include "refrob/report.hpp"

namespace refrob {

class FrobeniusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// Expresses G-invariant z-polynomials in the basic invariants of a basis.
/// The weight-j Taylor coefficients at q determine the answer through psi;
/// every result is then checked by full re-expansion.
class InvariantRewriter {
 public:
  explicit InvariantRewriter(const GoodBasis& basis);

  /// The unique P with P(x^1, ..., x^n) = f. Throws FrobeniusError with the
  /// residual when f is not a polynomial in the invariants.
  MultiPoly rewrite(const MultiPoly& f);
  /// x^a expanded in z coordinates.
  const MultiPoly& expand(const ExpVec& a);

 private:
  const GoodBasis& basis_;
  TaylorExpansion taylor_;
  std::map<std::uint64_t, MultiPoly> expanded_;
};

MultiPoly rewrite_in_invariants(const GoodBasis& basis, const MultiPoly& f);

/// I*(dx^alpha, dx^beta) = sum dx^alpha/dz^g1 dx^beta/dz^g2 I*(z^g1, z^g2), in X.
PolyMatrix intersection_form(const GoodBasis& basis);

/// Compares each entry with delta_{alpha+beta, n+1} x^n / x^n(q) plus the
/// Taylor coefficients of dx^alpha/dz^{beta*} + dx^beta/dz^{alpha*} at q over
/// monomials with b_n = 0 and d . b = d_alpha + d_beta - 2.
Report expansion_identity_check(const GoodBasis& basis, const PolyMatrix& intersection);
Report expansion_identity_check(const GoodBasis& basis);

struct FlatMetric {
  Matrix upper;  // g^{alpha beta}
  Matrix lower;  // g_{alpha beta}
};

/// g^{alpha beta} = d/dx^n (c I*(dx^alpha, dx^beta)), c = x^n(q). Throws
/// FrobeniusError when an entry is not constant.
FlatMetric flat_metric(const GoodBasis& basis, const PolyMatrix& intersection);

struct StructureConstants {
  int n = 0;
  std::vector<MultiPoly> data;  // C_{alpha beta}^gamma at (alpha * n + beta) * n + gamma
  const MultiPoly& operator()(int a, int b, int g) const {
    return data[static_cast<std::size_t>((a * n + b) * n + g)];
  }
  MultiPoly& operator()(int a, int b, int g) { return data[static_cast<std::size_t>((a * n + b) * n + g)]; }
};

/// C_{alpha beta}^gamma = d/dx^{gamma*} (d_n / (d_{alpha*} + d_{beta*} - 2) c I*(dx^{alpha*}, dx^{beta*})).
StructureConstants structure_constants(const GoodBasis& basis, const PolyMatrix& intersection,
                                       const FlatMetric& metric);

/// Weight 2 d_n + 2 potential F with d^2F/dx^{mu} dx^{nu} equal to
/// d_n / (d_{mu*} + d_{nu*} - 2) c I*(dx^{mu*}, dx^{nu*}), rebuilt from that
/// Hessian by the Euler relation. Throws FrobeniusError when the Hessian of
/// the result does not match (the Hessian data is not integrable).
MultiPoly potential(const GoodBasis& basis, const PolyMatrix& intersection, const FlatMetric& metric);

/// Weights d_alpha / d_n of E = sum (d_alpha / d_n) x^alpha d/dx^alpha.
std::vector<Rational> euler_field(const WeightVec& degrees);

struct FrobeniusData {
  GoodBasis basis;
  int n = 0;
  WeightVec degrees;
  CycScalar c;
  PolyMatrix intersection;
  FlatMetric metric;
  StructureConstants structure;
  MultiPoly potential;
  std::vector<Rational> euler_weights;
  int unit_index = 0;
};

FrobeniusData build_frobenius(const GoodBasis& basis);

/// Checks "lowered_symmetry", "potentiality", "metric_constant",
/// "metric_antidiagonal", "unit", "euler", "associativity",
/// "intersection_compatibility", "isometry" and "potential".
Report verify_axioms(const FrobeniusData& fd);

}  // namespace refrob
