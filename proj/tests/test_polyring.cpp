#include <doctest.h>

#include <random>
#include <set>

#include "refrob/linalg.hpp"
#include "refrob/polyring.hpp"

using namespace refrob;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, int n, int max_deg, int terms, int conductor = 5) {
  std::uniform_int_distribution<int> e(0, max_deg), c(-5, 5), k(0, conductor - 1);
  std::vector<MultiPoly::Term> ts;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = e(rng);
    ts.emplace_back(ExpVec(std::span<const int>(a)), CycScalar(c(rng)) + CycScalar(c(rng)) * zeta(conductor, k(rng)));
  }
  return MultiPoly::from_terms(n, std::move(ts));
}

Vector random_point(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> c(-3, 3);
  Vector p;
  for (int i = 0; i < n; ++i) p.push_back(CycScalar(Rational(c(rng), 2)) + zeta(5, 1) * CycScalar(c(rng)));
  return p;
}

}  // namespace

TEST_CASE("exponent vectors") {
  const ExpVec a{2, 0, 1};
  CHECK(a.total_degree() == 3);
  CHECK(a[0] == 2);
  CHECK((a + ExpVec{1, 1, 1}) == ExpVec{3, 1, 2});
  CHECK((a - ExpVec{1, 0, 1}) == ExpVec{1, 0, 0});
  CHECK(ExpVec{1, 0, 0}.divides(a));
  CHECK_FALSE(ExpVec{0, 1, 0}.divides(a));
  // graded first, then lexicographic
  CHECK(ExpVec{0, 0, 2} > ExpVec{1, 0, 0});
  CHECK(ExpVec{2, 0, 0} > ExpVec{1, 1, 0});
  CHECK(ExpVec::from_packed(a.packed(), 3) == a);
  CHECK_THROWS(ExpVec{127, 0} + ExpVec{1, 0});
}

TEST_CASE("monomials of weight match brute force") {
  const std::vector<WeightVec> weights{{2, 6, 10}, {2, 3, 4}, {2, 5, 8, 12}, {2, 4, 6, 8, 10}};
  for (const auto& d : weights) {
    const int n = d.size();
    for (int j = 0; j <= 2 * d.back(); ++j) {
      std::set<std::vector<int>> brute;
      std::vector<int> a(static_cast<std::size_t>(n), 0);
      // odometer over the box a_i <= j / d_i
      while (true) {
        int w = 0;
        for (int i = 0; i < n; ++i) w += a[static_cast<std::size_t>(i)] * d[i];
        if (w == j) brute.insert(a);
        int i = 0;
        while (i < n && ++a[static_cast<std::size_t>(i)] > j / d[i]) a[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
      }
      const auto got = monomials_of_weight(n, d, j);
      std::set<std::vector<int>> got_set;
      for (const auto& m : got) got_set.insert(m.to_vector());
      CHECK(got.size() == got_set.size());
      CHECK(got_set == brute);
    }
  }
  const auto h3 = monomials_of_weight(3, WeightVec{2, 6, 10}, 12);
  REQUIRE(h3.size() == 4);
  CHECK(h3[0] == ExpVec{6, 0, 0});
  CHECK(h3[3] == ExpVec{1, 0, 1});
}

TEST_CASE("monomials of degree are descending and complete") {
  const auto ms = monomials_of_degree(3, 4);
  CHECK(ms.size() == 15);
  for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i - 1] > ms[i]);
}

TEST_CASE("ring axioms and evaluation homomorphism") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const MultiPoly f = random_poly(rng, 3, 3, 6), g = random_poly(rng, 3, 3, 6), h = random_poly(rng, 3, 2, 4);
    CHECK(f * (g + h) == f * g + f * h);
    CHECK(f * g == g * f);
    CHECK((f - f).is_zero());
    const Vector p = random_point(rng, 3);
    CHECK(evaluate(f * g, p) == evaluate(f, p) * evaluate(g, p));
    CHECK(evaluate(f + g, p) == evaluate(f, p) + evaluate(g, p));
    CHECK(f.pow(3) == f * f * f);
    CHECK(poly_arith(PolyOp::sub, f, g) == f - g);
  }
}

TEST_CASE("Leibniz rule") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const MultiPoly f = random_poly(rng, 3, 4, 5), g = random_poly(rng, 3, 4, 5);
    for (int v = 0; v < 3; ++v) CHECK(derive(f * g, v) == derive(f, v) * g + f * derive(g, v));
    CHECK(derive(f, ExpVec{1, 1, 0}) == derive(derive(f, 0), 1));
  }
  CHECK(derive(MultiPoly::monomial(ExpVec{3, 1}, 2), 0) == MultiPoly::monomial(ExpVec{2, 1}, 6));
}

TEST_CASE("Taylor expansion at a point") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const MultiPoly f = random_poly(rng, 3, 3, 6);
    const Vector p = random_point(rng, 3), z = random_point(rng, 3);
    const MultiPoly s = shift(f, p);
    Vector zp;
    for (int i = 0; i < 3; ++i) zp.push_back(z[static_cast<std::size_t>(i)] + p[static_cast<std::size_t>(i)]);
    CHECK(evaluate(s, z) == evaluate(f, zp));
    for (const auto& [b, c] : s.terms()) CHECK(taylor_coeff(f, b, p) == c);
    CHECK(shift(s, Vector{-p[0], -p[1], -p[2]}) == f);
  }
}

TEST_CASE("linear substitution is a ring homomorphism") {
  std::mt19937_64 rng(4);
  const Matrix m = Matrix::from_rows({{1, zeta(5, 1), 0}, {0, 1, 2}, {CycScalar(Rational(1, 3)), 0, 1}});
  for (int trial = 0; trial < 5; ++trial) {
    const MultiPoly f = random_poly(rng, 3, 3, 5), g = random_poly(rng, 3, 3, 5);
    CHECK(subst_linear(f * g, m) == subst_linear(f, m) * subst_linear(g, m));
    CHECK(subst_linear(f + g, m) == subst_linear(f, m) + subst_linear(g, m));
    const Vector z = random_point(rng, 3);
    CHECK(evaluate(subst_linear(f, m), z) == evaluate(f, m * z));
  }
}

TEST_CASE("composition and weighted truncation") {
  std::mt19937_64 rng(5);
  const WeightVec d{2, 3, 5};
  for (int trial = 0; trial < 5; ++trial) {
    const MultiPoly f = random_poly(rng, 3, 3, 5);
    const std::vector<MultiPoly> gs{random_poly(rng, 3, 2, 3), random_poly(rng, 3, 2, 3), random_poly(rng, 3, 1, 2)};
    const MultiPoly full = compose(f, gs);
    const Vector z = random_point(rng, 3);
    Vector images;
    for (const auto& g : gs) images.push_back(evaluate(g, z));
    CHECK(evaluate(full, z) == evaluate(f, images));
    for (int w : {0, 4, 9, 15}) {
      CHECK(compose_truncated(f, gs, d, w) == truncate_weight(full, d, w));
      CHECK(mul_truncated(f, gs[0], d, w) == truncate_weight(f * gs[0], d, w));
    }
    MultiPoly sum(3);
    for (int j = 0; j <= 120; ++j) {
      const MultiPoly part = weighted_part(full, d, j);
      if (!part.is_zero()) CHECK(homogeneous_weight(part, d) == j);
      sum += part;
    }
    CHECK(sum == full);
  }
}

TEST_CASE("multinomial powers of linear forms") {
  const Vector c{1, zeta(5, 2), CycScalar(Rational(-1, 2))};
  MultiPoly l(3);
  for (int i = 0; i < 3; ++i) l += MultiPoly::variable(3, i) * c[static_cast<std::size_t>(i)];
  for (int k = 0; k <= 6; ++k) CHECK(linear_form_power(c, k) == l.pow(k));
  CHECK(factorial(ExpVec{3, 0, 2}) == Rational(12));
}

TEST_CASE("printing and coefficient lookup") {
  const MultiPoly f = MultiPoly::monomial(ExpVec{2, 1}, 3) + MultiPoly::constant(2, CycScalar(Rational(-1, 2)));
  CHECK(f.to_string() == "3*x1^2*x2 - 1/2");
  CHECK(f.to_string("z") == "3*z1^2*z2 - 1/2");
  CHECK(f.coeff(ExpVec{2, 1}) == CycScalar(3));
  CHECK(f.coeff(ExpVec{1, 1}).is_zero());
  CHECK(f.total_degree() == 3);
  CHECK(MultiPoly(2).total_degree() == -1);
}
