#include <doctest.h>

#include <random>

#include "refrob/groups.hpp"
#include "refrob/kernels.hpp"

using namespace refrob;

namespace {

MultiPoly dense(int n, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-7, 7), k(0, 9);
  MultiPoly f(n);
  for (int t = 0; t <= deg; ++t)
    for (const auto& m : monomials_of_degree(n, t)) f += MultiPoly::monomial(m, CycScalar(c(rng)) + zeta(10, k(rng)));
  return f;
}

}  // namespace

TEST_CASE("parallel multiply equals the serial reference") {
  std::mt19937_64 rng(17);
  const MultiPoly f = dense(4, 6, rng), g = dense(4, 5, rng);
  const MultiPoly serial = kernels::multiply_serial(f, g);
  CHECK(kernels::multiply_parallel(f, g) == serial);
  CHECK(kernels::multiply(f, g) == serial);
  CHECK(f * g == serial);

  const WeightVec d{2, 5, 8, 12};
  for (int w : {0, 10, 24, 40}) {
    const MultiPoly ts = kernels::multiply_serial(f, g, &d, w);
    CHECK(ts == truncate_weight(serial, d, w));
    CHECK(kernels::multiply_parallel(f, g, &d, w) == ts);
  }
}

TEST_CASE("multiply handles zero and constants") {
  std::mt19937_64 rng(1);
  const MultiPoly f = dense(3, 3, rng);
  CHECK(kernels::multiply_parallel(f, MultiPoly(3)).is_zero());
  CHECK(kernels::multiply_parallel(MultiPoly::constant(3, 1), f) == f);
}

TEST_CASE("parallel orbit sum equals the serial reference") {
  const auto group = build_group({Family::H3, 3, 0});
  const auto& elements = group->elements();
  REQUIRE(elements.size() == 120);
  const MultiPoly f = MultiPoly::monomial(ExpVec{2, 0, 0}) + MultiPoly::monomial(ExpVec{0, 1, 1}, zeta(10, 3));
  const MultiPoly serial = kernels::orbit_sum_serial(f, elements);
  CHECK(kernels::orbit_sum_parallel(f, elements) == serial);
  CHECK(kernels::orbit_sum(f, elements) == serial);
  CHECK(is_invariant(*group, serial));
}

TEST_CASE("thread count is positive") { CHECK(kernels::max_threads() >= 1); }
