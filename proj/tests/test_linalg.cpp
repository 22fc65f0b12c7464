#include <doctest.h>

#include <random>

#include "refrob/linalg.hpp"

using namespace refrob;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, int conductor) {
  std::uniform_int_distribution<int> v(-4, 4), k(0, conductor - 1);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = CycScalar(v(rng)) + CycScalar(v(rng)) * zeta(conductor, k(rng));
  return m;
}

// Leibniz expansion.
CycScalar leibniz(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  CycScalar det = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    CycScalar term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
    det += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

}  // namespace

TEST_CASE("determinant agrees with the Leibniz formula") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 5; ++n) {
    const Matrix m = random_matrix(rng, n, 5);
    CHECK(determinant(m) == leibniz(m));
  }
}

TEST_CASE("inverse and solve") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix m = random_matrix(rng, 4, 12);
    if (determinant(m).is_zero()) continue;
    CHECK((m * inverse(m)).is_identity());
    CHECK((inverse(m) * m).is_identity());
    const Vector b{1, zeta(12, 1), 0, CycScalar(Rational(1, 3))};
    const auto x = solve(m, b);
    REQUIRE(x);
    CHECK(m * *x == b);
  }
}

TEST_CASE("rank, nullspace and inconsistent systems") {
  const Matrix m = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(rank(m) == 2);
  const auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  CHECK((m * ns[0]) == Vector{0, 0, 0});
  CHECK_FALSE(solve(m, Vector{1, 0, 0}).has_value());
  CHECK_THROWS_AS(solve(m, Vector{1, 2, 1}), LinalgError);
  CHECK_THROWS_AS(inverse(m), LinalgError);
}

TEST_CASE("characteristic polynomial of a rotation") {
  // rotation by 2 pi / 5 in the basis of Q(zeta_5) acting on itself
  const CycScalar c = (zeta(5, 1) + zeta(5, 4)) * CycScalar(Rational(1, 2));
  const CycScalar s2 = CycScalar(1) - c * c;
  const Matrix m = Matrix::from_rows({{c, -s2}, {1, c}});
  const Vector p = charpoly(m);
  REQUIRE(p.size() == 3);
  CHECK(p[2].is_one());
  CHECK(p[1] == -(zeta(5, 1) + zeta(5, 4)));
  CHECK(p[0] == determinant(m));
  CHECK(p[0].is_one());
}

TEST_CASE("powers and transpose") {
  const Matrix m = Matrix::from_rows({{0, -1}, {1, -1}});
  CHECK(power(m, 3).is_identity());
  CHECK(power(m, -1) == power(m, 2));
  CHECK(m.transpose().transpose() == m);
  CHECK(left_multiply(Vector{1, 2}, m) == m.transpose() * Vector{1, 2});
}
