#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "refrob/scalar.hpp"

using namespace refrob;

namespace {

using Poly = std::vector<Rational>;  // constant term first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

// Long division a = q b + r.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  Poly q;
  trim(a);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    if (q.size() < shift + 1) q.resize(shift + 1);
    q[shift] = c;
    Poly t(shift + 1);
    t[shift] = c;
    a = sub(a, mul(t, b));
  }
  return {q, a};
}

// Extended Euclid: inverse of a modulo m over Q.
Poly inverse_mod(const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = a, s0 = {}, s1 = {Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s;
  }
  REQUIRE(r0.size() == 1);
  for (auto& c : s0) c /= r0[0];
  return divmod(s0, m).second;
}

Poly cyclotomic_oracle(int n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  Poly p(static_cast<std::size_t>(n) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) p = divmod(p, cyclotomic_oracle(d)).first;
  return p;
}

CycScalar random_element(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int i = 0; i < euler_phi(n); ++i) {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    c.push_back(r);
  }
  return CycScalar::from_coords(n, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials match the divisor quotient") {
  for (int n : {1, 2, 3, 5, 8, 10, 12, 15, 20, 24, 30, 42}) {
    const Poly oracle = cyclotomic_oracle(n);
    const auto& got = cyclotomic_polynomial(n);
    REQUIRE(got.size() == oracle.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(Rational(got[i]) == oracle[i]);
    CHECK(static_cast<int>(got.size()) - 1 == euler_phi(n));
  }
}

TEST_CASE("inverse of 1 + zeta_5 agrees with extended Euclid") {
  const CycScalar a = CycScalar(1) + zeta(5, 1);
  const CycScalar inv = a.inverse();
  const Poly oracle = inverse_mod({Rational(1), Rational(1)}, cyclotomic_oracle(5));
  const auto coords = inv.coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const Rational want = i < oracle.size() ? oracle[i] : Rational(0);
    CHECK(coords[i] == want);
  }
  CHECK((a * inv).is_one());
  // -zeta - zeta^3
  CHECK(inv == -zeta(5, 1) - zeta(5, 3));
  CHECK((CycScalar(1) / a) == inv);
}

TEST_CASE("inverses of random elements agree with extended Euclid") {
  std::mt19937_64 rng(7);
  for (int n : {7, 12, 20}) {
    const Poly phi = cyclotomic_oracle(n);
    for (int trial = 0; trial < 5; ++trial) {
      const CycScalar a = random_element(rng, n);
      if (a.is_zero()) continue;
      Poly pa = a.coords();
      trim(pa);
      const Poly oracle = inverse_mod(pa, phi);
      const auto coords = a.inverse().coords();
      for (std::size_t i = 0; i < coords.size(); ++i) CHECK(coords[i] == (i < oracle.size() ? oracle[i] : Rational(0)));
    }
  }
}

TEST_CASE("numerical values") {
  CHECK(std::abs(approx(zeta(5, 1) + zeta(5, 4)) - std::complex<double>(2 * std::cos(2 * std::numbers::pi / 5), 0)) <
        1e-12);
  for (int m = 2; m <= 12; ++m) {
    CHECK(std::abs(approx(cos_pi_over(m)) - std::cos(std::numbers::pi / m)) < 1e-12);
  }
  CHECK(std::abs(approx(zeta(12, 5)) - std::polar(1.0, 2 * std::numbers::pi * 5 / 12)) < 1e-12);
}

TEST_CASE("zeta has exact multiplicative order") {
  for (int n : {3, 4, 5, 10, 12, 24}) {
    CycScalar p = 1;
    for (int k = 1; k <= n; ++k) {
      p *= zeta(n, 1);
      CHECK(p.is_one() == (k == n));
    }
    CHECK(pow(zeta(n, 1), n).is_one());
    CHECK(pow(zeta(n, 1), -1) == zeta(n, n - 1));
  }
}

TEST_CASE("lift and reduce round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CycScalar a = random_element(rng, 5);
    for (int target : {10, 20, 30}) {
      const CycScalar lifted = lift_conductor(a, target);
      CHECK(lifted.conductor() == target);
      CHECK(lifted == a);
      CHECK(reduce_conductor(lifted, 5).coords() == a.coords());
    }
  }
  CHECK_THROWS_AS(reduce_conductor(zeta(8, 1), 4), ScalarError);
  // sqrt 2 = zeta_8 + zeta_8^7 is real but not in Q(i)
  const CycScalar sqrt2 = zeta(8, 1) + zeta(8, 7);
  CHECK(sqrt2 * sqrt2 == CycScalar(2));
}

TEST_CASE("rationals demote to conductor 1") {
  const CycScalar a = zeta(6, 1) + zeta(6, 5);  // 1
  CHECK(a.is_one());
  CHECK(a.conductor() == 1);
  CHECK((zeta(3, 1) * zeta(3, 2)).is_rational());
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 ? 12 : 15;
    const CycScalar a = random_element(rng, n), b = random_element(rng, n), c = random_element(rng, 20);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a - a == CycScalar(0));
    if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
    CHECK(a.conj().conj() == a);
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(std::abs(approx(a * b) - approx(a) * approx(b)) < 1e-6 * (1 + std::abs(approx(a * b))));
    CycScalar acc = c;
    fused_multiply_add(acc, a, b);
    CHECK(acc == c + a * b);
    if (a == b) CHECK(a.hash() == b.hash());
  }
}

TEST_CASE("conductor ceiling and division by zero") {
  CHECK_THROWS_AS(arith(ArithOp::mul, zeta(7, 1), zeta(11, 1), 60), ConductorOverflow);
  CHECK(arith(ArithOp::mul, zeta(7, 1), zeta(11, 1), 100) == zeta(77, 18));
  CHECK_THROWS_AS(CycScalar(0).inverse(), DivisionByZero);
  CHECK_THROWS_AS(zeta(5, 1) / CycScalar(0), DivisionByZero);
}

TEST_CASE("printing") {
  CHECK(CycScalar(Rational(-3, 4)).to_string() == "-3/4");
  CHECK(zeta(8, 3).to_string() == "E(8)^3");
}
