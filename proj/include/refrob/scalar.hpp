#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// A CycScalar stores its value in the power basis 1, zeta_N, ..., zeta_N^{phi(N)-1}
// modulo the N-th cyclotomic polynomial, as integer numerators over one common
// positive denominator. Values that happen to be rational are always stored at
// conductor 1, so the rational subfield has a single canonical form.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace refrob {

using Integer = mpz_class;
using Rational = mpq_class;

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public ScalarError {
 public:
  DivisionByZero() : ScalarError("division by zero in cyclotomic field") {}
};

class ConductorOverflow : public ScalarError {
 public:
  using ScalarError::ScalarError;
};

inline constexpr int kDefaultConductorCap = 120;

/// Conductor ceiling used by the arithmetic operators. Starts from the
/// REFROB_CONDUCTOR_CAP environment variable, falling back to 120.
int conductor_cap();
void set_conductor_cap(int cap);

int euler_phi(int n);

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<long>& cyclotomic_polynomial(int n);

namespace detail {
struct CyclotomicField;
}

class CycScalar {
 public:
  CycScalar();
  CycScalar(long value);  // NOLINT(google-explicit-constructor)
  explicit CycScalar(const Rational& value);

  /// Builds the element sum coords[i] * zeta_N^i. The coordinate vector may
  /// be shorter or longer than phi(N); it is reduced modulo Phi_N.
  static CycScalar from_coords(int conductor, std::span<const Rational> coords);

  int conductor() const;
  int degree() const;  // phi(conductor)
  std::vector<Rational> coords() const;
  Rational coord(int i) const;
  const Integer& denominator() const { return den_; }
  std::span<const Integer> numerators() const { return num_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const { return conductor() == 1; }
  Rational to_rational() const;

  CycScalar inverse() const;
  /// Complex conjugation, zeta_N -> zeta_N^{-1}.
  CycScalar conj() const;

  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& other);
  CycScalar& operator-=(const CycScalar& other);
  CycScalar& operator*=(const CycScalar& other);
  CycScalar& operator/=(const CycScalar& other);

  friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
  friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
  friend CycScalar operator*(const CycScalar& a, const CycScalar& b);
  friend CycScalar operator/(const CycScalar& a, const CycScalar& b);
  friend bool operator==(const CycScalar& a, const CycScalar& b);

  /// acc += a * b without materializing the product when conductors agree.
  friend void fused_multiply_add(CycScalar& acc, const CycScalar& a, const CycScalar& b);

  /// Hash consistent with == for values stored at the same conductor.
  std::size_t hash() const;

  /// Human readable form using E(N) for zeta_N, e.g. "1/2 + 3*E(8)^3".
  std::string to_string() const;

 private:
  friend CycScalar lift_conductor(const CycScalar& a, int target);
  friend CycScalar reduce_conductor(const CycScalar& a, int target);

  CycScalar(const detail::CyclotomicField* field, std::vector<Integer> num, Integer den);
  void normalize();
  void demote_if_rational();

  const detail::CyclotomicField* field_;
  std::vector<Integer> num_;
  Integer den_;
};

enum class ArithOp { add, sub, mul, div };

/// Field operation with an explicit conductor ceiling for the common field.
CycScalar arith(ArithOp op, const CycScalar& a, const CycScalar& b, int cap);
CycScalar arith(ArithOp op, const CycScalar& a, const CycScalar& b);

/// a^e; negative exponents invert.
CycScalar pow(const CycScalar& a, long e);

/// zeta_N^k, reduced modulo Phi_N.
CycScalar zeta(int n, long k);

/// cos(pi / m) as an element of Q(zeta_{2m}).
CycScalar cos_pi_over(int m);

/// Same value expressed at conductor `target`, which must be a multiple of the
/// current conductor.
CycScalar lift_conductor(const CycScalar& a, int target);

/// Inverse of lift_conductor: expresses `a` at conductor `target` (a divisor of
/// its conductor). Throws ScalarError when the value is not in Q(zeta_target).
CycScalar reduce_conductor(const CycScalar& a, int target);

/// Numerical value at zeta_N = exp(2 pi i / N). Reporting only.
std::complex<double> approx(const CycScalar& a);

struct CycScalarHash {
  std::size_t operator()(const CycScalar& a) const { return a.hash(); }
};

}  // namespace refrob
