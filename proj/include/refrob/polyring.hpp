#pragma once

// Sparse multivariate polynomials over CycScalar.
//
// Variables are indexed from 0. Terms are kept sorted by descending graded-lex
// order (total degree first, then lexicographic with variable 0 most
// significant) and never carry a zero coefficient.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "refrob/linalg.hpp"
#include "refrob/scalar.hpp"

namespace refrob {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExponent = 127;

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponent multi-index a = (a_1, ..., a_n), packed one byte per variable.
class ExpVec {
 public:
  ExpVec() = default;
  explicit ExpVec(int nvars);
  ExpVec(std::initializer_list<int> exps);
  explicit ExpVec(std::span<const int> exps);
  static ExpVec unit(int nvars, int var);
  static ExpVec from_packed(std::uint64_t packed, int nvars);

  int size() const { return n_; }
  int operator[](int i) const { return static_cast<int>((packed_ >> shift(i)) & 0xffU); }
  ExpVec with(int i, int e) const;
  int total_degree() const { return deg_; }
  std::vector<int> to_vector() const;
  std::uint64_t packed() const { return packed_; }

  bool divides(const ExpVec& other) const;

  friend ExpVec operator+(const ExpVec& a, const ExpVec& b);
  /// Componentwise difference; requires b to divide a.
  friend ExpVec operator-(const ExpVec& a, const ExpVec& b);
  friend bool operator==(const ExpVec& a, const ExpVec& b) = default;
  /// Graded-lex order.
  friend std::strong_ordering operator<=>(const ExpVec& a, const ExpVec& b) {
    if (auto c = a.deg_ <=> b.deg_; c != 0) return c;
    return a.packed_ <=> b.packed_;
  }

  std::string to_string() const;

 private:
  static int shift(int i) { return 56 - 8 * i; }

  std::uint64_t packed_ = 0;
  std::uint16_t deg_ = 0;
  std::uint8_t n_ = 0;
};

/// Positive, non-decreasing weights d = (d_1, ..., d_n).
class WeightVec {
 public:
  WeightVec() = default;
  WeightVec(std::initializer_list<int> w);
  explicit WeightVec(std::vector<int> w);

  int size() const { return static_cast<int>(w_.size()); }
  int operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return w_; }
  int back() const { return w_.back(); }
  /// Weighted degree d . a.
  int dot(const ExpVec& a) const;

  friend bool operator==(const WeightVec&, const WeightVec&) = default;

 private:
  std::vector<int> w_;
};

class MultiPoly {
 public:
  using Term = std::pair<ExpVec, CycScalar>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars);

  static MultiPoly constant(int nvars, const CycScalar& c);
  static MultiPoly variable(int nvars, int var);
  static MultiPoly monomial(const ExpVec& exp, const CycScalar& c = 1);
  /// Sorts, merges equal exponents and drops zeros.
  static MultiPoly from_terms(int nvars, std::vector<Term> terms);
  /// Takes terms that are already strictly descending with nonzero
  /// coefficients; only checked in debug builds.
  static MultiPoly from_sorted_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return n_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  CycScalar coeff(const ExpVec& exp) const;
  /// Largest total degree |a| among the terms; -1 for the zero polynomial.
  int total_degree() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& g);
  MultiPoly& operator-=(const MultiPoly& g);
  MultiPoly& operator*=(const MultiPoly& g);
  MultiPoly& operator*=(const CycScalar& c);

  friend MultiPoly operator+(MultiPoly f, const MultiPoly& g) { return f += g; }
  friend MultiPoly operator-(MultiPoly f, const MultiPoly& g) { return f -= g; }
  friend MultiPoly operator*(const MultiPoly& f, const MultiPoly& g);
  friend MultiPoly operator*(MultiPoly f, const CycScalar& c) { return f *= c; }
  friend MultiPoly operator*(const CycScalar& c, MultiPoly f) { return f *= c; }
  friend bool operator==(const MultiPoly& f, const MultiPoly& g);

  MultiPoly pow(int k) const;

  /// e.g. "3*x1^2*x2 - 1/2*E(8)*x3"; `var` names variables (default x1..xn).
  std::string to_string(const std::string& var = "x") const;

 private:
  friend class PolyBuilder;
  int n_ = 0;
  std::vector<Term> terms_;
};

/// Accumulates terms into a hash map and produces a normalized MultiPoly.
class PolyBuilder {
 public:
  explicit PolyBuilder(int nvars) : n_(nvars) {}
  void add(const ExpVec& exp, const CycScalar& c);
  void add_product(const ExpVec& exp, const CycScalar& a, const CycScalar& b);
  void add(const MultiPoly& f);
  std::size_t size() const { return acc_.size(); }
  MultiPoly build() &&;

 private:
  int n_;
  std::unordered_map<std::uint64_t, CycScalar> acc_;
};

enum class PolyOp { add, sub, mul };

MultiPoly poly_arith(PolyOp op, const MultiPoly& f, const MultiPoly& g);

/// Partial derivative with respect to variable `var` (0-based).
MultiPoly derive(const MultiPoly& f, int var);
/// d^b f / dz^b.
MultiPoly derive(const MultiPoly& f, const ExpVec& b);

CycScalar evaluate(const MultiPoly& f, std::span<const CycScalar> point);

/// (1/b!) (d^b f / dz^b)(q).
CycScalar taylor_coeff(const MultiPoly& f, const ExpVec& b, std::span<const CycScalar> q);

/// f(z + p): the Taylor expansion of f at p, recentred at the origin. The
/// coefficient of z^b is taylor_coeff(f, b, p).
MultiPoly shift(const MultiPoly& f, std::span<const CycScalar> p);

/// Sum of the terms c_b z^b of f with d . b = j.
MultiPoly weighted_part(const MultiPoly& f, const WeightVec& d, int j);
/// Terms with d . b <= max_weight.
MultiPoly truncate_weight(const MultiPoly& f, const WeightVec& d, int max_weight);
/// The weight j when every term has d . b = j (0 for the zero polynomial).
std::optional<int> homogeneous_weight(const MultiPoly& f, const WeightVec& d);

/// Product with every term of weight > max_weight dropped. Exact on all
/// weights <= max_weight because weights are non-negative.
MultiPoly mul_truncated(const MultiPoly& f, const MultiPoly& g, const WeightVec& d, int max_weight);

/// f with variable i replaced by sum_j M(i, j) z_j.
MultiPoly subst_linear(const MultiPoly& f, const Matrix& m);

/// f(g_1, ..., g_m) for f in m variables and g_k in a common ring.
MultiPoly compose(const MultiPoly& f, std::span<const MultiPoly> gs);

/// compose() keeping only terms of weight <= max_weight in the target ring.
MultiPoly compose_truncated(const MultiPoly& f, std::span<const MultiPoly> gs, const WeightVec& d, int max_weight);

/// (sum_i c_i z_i)^k by the multinomial theorem.
MultiPoly linear_form_power(std::span<const CycScalar> coeffs, int k);

/// All b in Z_{>=0}^n with d . b = j. Ordered by comparing exponents from the
/// last variable to the first, smallest first.
std::vector<ExpVec> monomials_of_weight(int n, const WeightVec& d, int j);

/// All b with |b| = k, in descending graded-lex order.
std::vector<ExpVec> monomials_of_degree(int n, int k);

Rational factorial(const ExpVec& b);

}  // namespace refrob
