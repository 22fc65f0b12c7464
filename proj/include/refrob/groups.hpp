#pragma once

// Finite Coxeter groups in their reflection representation.
//
// Vectors are written in the simple-root basis: v = sum_i c_i alpha_i, and
// polynomials on V are polynomials in the root coordinates y_i(v) = c_i. The
// invariant form is the Gram matrix B_ij = -cos(pi / m_ij), so the simple
// reflection s_i acts on coordinates as I - 2 e_i B_i (B_i the i-th row).
// Group elements act on functions by (g.F)(v) = F(g^{-1} v).

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refrob/linalg.hpp"
#include "refrob/polyring.hpp"
#include "refrob/scalar.hpp"

namespace refrob {

enum class Family { A, B, D, I2, H3, F4 };

struct GroupSpec {
  Family family = Family::A;
  int rank = 2;
  int m = 0;  // edge label, I2 only

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

class UnsupportedGroup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultElementCap = 20000;

/// "A3", "I2(5)", "H3".
std::string to_string(const GroupSpec& spec);
std::string family_name(Family f);
/// Accepts "A".."F4" style names; throws UnsupportedGroup for unknown names.
Family parse_family(const std::string& name);

/// Throws UnsupportedGroup, with the reason, for anything outside the catalog.
void validate(const GroupSpec& spec);
bool is_supported(const GroupSpec& spec);
/// Every supported group in catalog order.
std::vector<GroupSpec> supported_groups();

WeightVec degrees_of(const GroupSpec& spec);
/// lcm(h, 2 * largest edge label).
int conductor_of(const GroupSpec& spec);
Integer order_of(const GroupSpec& spec);
/// Coxeter matrix m_ij (m_ii = 1, 2 for commuting nodes).
std::vector<std::vector<int>> coxeter_matrix(const GroupSpec& spec);

/// Normalized eigencoordinates for a Coxeter-type element g.
struct EigenFrame {
  Matrix z_basis;    // row alpha: z^alpha as a linear form in root coordinates
  Matrix z_inverse;  // y = z_inverse * z
  CycScalar zeta;
  Vector q;          // root coordinates of the regular eigenvector
  Vector q_z;        // z-coordinates of q: (0, ..., 0, 1)
  Matrix dual_gram;  // I*(z^alpha, z^beta), the antidiagonal unit
  CycScalar kappa;   // I* used here is B^{-1} / kappa
};

class ReflectionGroup {
 public:
  static std::shared_ptr<const ReflectionGroup> build(const GroupSpec& spec,
                                                      std::size_t element_cap = kDefaultElementCap);

  const GroupSpec& spec() const { return spec_; }
  std::string name() const { return to_string(spec_); }
  int rank() const { return spec_.rank; }
  int conductor() const { return conductor_; }
  const WeightVec& degrees() const { return degrees_; }
  int coxeter_number() const { return degrees_.back(); }
  Integer order() const { return order_of(spec_); }
  std::size_t element_cap() const { return element_cap_; }

  const std::vector<Matrix>& simple_reflections() const { return reflections_; }
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return gram_inverse_; }

  /// Full element list by BFS closure over the generators. Throws GroupError
  /// when the closure would exceed the element cap.
  const std::vector<Matrix>& elements() const;
  bool elements_materialized() const;

  /// Basic invariants x^1..x^n (not yet good) in root coordinates.
  const std::vector<MultiPoly>& initial_invariants() const { return invariants_; }

  /// Expresses a scalar at the group's conductor (rational values unchanged).
  CycScalar at_conductor(const CycScalar& a) const;

 private:
  ReflectionGroup() = default;

  GroupSpec spec_;
  int conductor_ = 1;
  WeightVec degrees_;
  std::size_t element_cap_ = kDefaultElementCap;
  std::vector<Matrix> reflections_;
  Matrix gram_;
  Matrix gram_inverse_;
  std::vector<MultiPoly> invariants_;

  mutable std::once_flag elements_once_;
  mutable std::vector<Matrix> elements_;
  mutable bool elements_ok_ = false;
  mutable std::string elements_error_;

  friend std::shared_ptr<const ReflectionGroup> build_group(const GroupSpec&, std::size_t);
};

using GroupPtr = std::shared_ptr<const ReflectionGroup>;

GroupPtr build_group(const GroupSpec& spec, std::size_t element_cap = kDefaultElementCap);

/// s_1 s_2 ... s_n.
Matrix coxeter_element(const ReflectionGroup& group);

/// Eigencoordinates of g with z^alpha . g = zeta^{1 - d_alpha} z^alpha and
/// g q = zeta q. Without `q`, q is the eigenvector whose first nonzero root
/// coordinate is 1. Scaling: I* is divided by kappa (the self-pairing of the
/// middle eigenform when n is odd, 1 / I(conj(q), q) when n is even), z^n is
/// scaled so that z^n(q) = 1, z^1 so that I*(z^1, z^n) = 1, and z^{n+1-a}
/// so that I*(z^a, z^{n+1-a}) = 1 for the remaining pairs.
EigenFrame eigen_frame(const ReflectionGroup& group, const Matrix& g, const CycScalar& zeta,
                       const std::optional<Vector>& q = std::nullopt);

/// Frame for the Coxeter element and zeta_h.
EigenFrame standard_frame(const ReflectionGroup& group);

const std::vector<MultiPoly>& initial_basic_invariants(const ReflectionGroup& group);

/// (1 / |G|) sum_g f(g v), f in root coordinates.
MultiPoly reynolds(const ReflectionGroup& group, const MultiPoly& f);

/// f(s_i v) == f(v) for every simple reflection.
bool is_invariant(const ReflectionGroup& group, const MultiPoly& f);

/// Rewrites a root-coordinate polynomial in the frame's z coordinates.
MultiPoly to_z_coords(const MultiPoly& f, const EigenFrame& frame);

/// Multiplicative order of a square matrix, or nullopt beyond `limit`.
std::optional<long> matrix_order(const Matrix& m, long limit = 10000);

}  // namespace refrob
