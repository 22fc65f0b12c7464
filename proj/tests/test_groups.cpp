#include <doctest.h>

#include <algorithm>

#include "refrob/groups.hpp"

using namespace refrob;

namespace {

std::vector<int> degree_table(const GroupSpec& s) {
  std::vector<int> d;
  switch (s.family) {
    case Family::A:
      for (int k = 2; k <= s.rank + 1; ++k) d.push_back(k);
      break;
    case Family::B:
      for (int k = 1; k <= s.rank; ++k) d.push_back(2 * k);
      break;
    case Family::D:
      for (int k = 1; k < s.rank; ++k) d.push_back(2 * k);
      d.push_back(s.rank);
      std::sort(d.begin(), d.end());
      break;
    case Family::I2:
      d = {2, s.m};
      break;
    case Family::H3:
      d = {2, 6, 10};
      break;
    case Family::F4:
      d = {2, 6, 8, 12};
      break;
  }
  return d;
}

// prod (t - r), constant term first
Vector poly_from_roots(const Vector& roots) {
  Vector p{1};
  for (const auto& r : roots) {
    Vector q(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = q;
  }
  return p;
}

bool same_poly(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("catalog degrees, orders and names") {
  const auto groups = supported_groups();
  CHECK(groups.size() == 5 + 5 + 1 + 10 + 2);
  for (const auto& s : groups) {
    CAPTURE(to_string(s));
    CHECK(degrees_of(s).values() == degree_table(s));
    Integer prod = 1;
    for (int d : degree_table(s)) prod *= d;
    CHECK(order_of(s) == prod);
    CHECK(conductor_of(s) <= 42);
  }
  CHECK(to_string({Family::I2, 2, 5}) == "I2(5)");
  CHECK(to_string({Family::H3, 3, 0}) == "H3");
  CHECK(to_string({Family::A, 3, 0}) == "A3");
}

TEST_CASE("unsupported groups are rejected with a reason") {
  try {
    validate({Family::D, 4, 0});
    FAIL("D4 accepted");
  } catch (const UnsupportedGroup& e) {
    CHECK(std::string(e.what()).find("normaliz") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_family("H4"), UnsupportedGroup);
  CHECK_THROWS_AS(parse_family("E6"), UnsupportedGroup);
  CHECK_THROWS_AS(validate({Family::A, 9, 0}), UnsupportedGroup);
  CHECK_FALSE(is_supported({Family::D, 6, 0}));
  CHECK(is_supported({Family::D, 5, 0}));
}

TEST_CASE("reflections preserve the Gram form") {
  for (const auto& s : supported_groups()) {
    CAPTURE(to_string(s));
    const auto g = build_group(s);
    const Matrix& b = g->gram();
    for (const auto& r : g->simple_reflections()) {
      CHECK((r * r).is_identity());
      CHECK(r.transpose() * b * r == b);
    }
    CHECK((b * g->gram_inverse()).is_identity());
  }
}

TEST_CASE("group closure has the catalog order") {
  for (const auto& s : supported_groups()) {
    if (order_of(s) > 6000) continue;
    CAPTURE(to_string(s));
    const auto g = build_group(s);
    CHECK(Integer(static_cast<long>(g->elements().size())) == order_of(s));
  }
  const auto b6 = build_group({Family::B, 6, 0}, 100);
  CHECK_THROWS_AS(b6->elements(), GroupError);
}

TEST_CASE("Coxeter element spectrum") {
  for (const auto& s : supported_groups()) {
    CAPTURE(to_string(s));
    const auto g = build_group(s);
    const Matrix c = coxeter_element(*g);
    const int h = g->coxeter_number();
    CHECK(matrix_order(c) == h);
    Vector roots;
    for (int d : g->degrees().values()) roots.push_back(zeta(h, d - 1));
    CHECK(same_poly(charpoly(c), poly_from_roots(roots)));
  }
  // explicit cases
  const auto h3 = build_group({Family::H3, 3, 0});
  CHECK(same_poly(charpoly(coxeter_element(*h3)), poly_from_roots({zeta(10, 1), zeta(10, 5), zeta(10, 9)})));
  const auto b2 = build_group({Family::B, 2, 0});
  CHECK(same_poly(charpoly(coxeter_element(*b2)), poly_from_roots({zeta(4, 1), zeta(4, 3)})));
  CHECK(matrix_order(coxeter_element(*build_group({Family::I2, 2, 3}))) == 3);
}

TEST_CASE("initial invariants") {
  for (const auto& s : supported_groups()) {
    CAPTURE(to_string(s));
    const auto g = build_group(s);
    const auto& inv = g->initial_invariants();
    REQUIRE(static_cast<int>(inv.size()) == g->rank());
    for (int a = 0; a < g->rank(); ++a) {
      CHECK(is_invariant(*g, inv[static_cast<std::size_t>(a)]));
      CHECK(homogeneous_weight(inv[static_cast<std::size_t>(a)], WeightVec(std::vector<int>(g->rank(), 1))) ==
            g->degrees()[a]);
    }
  }
}

TEST_CASE("Reynolds operator is an idempotent projection") {
  const auto g = build_group({Family::A, 3, 0});
  const MultiPoly f = MultiPoly::monomial(ExpVec{2, 1, 0}) + MultiPoly::monomial(ExpVec{0, 0, 3}, 5);
  const MultiPoly rf = reynolds(*g, f);
  CHECK(is_invariant(*g, rf));
  CHECK(reynolds(*g, rf) == rf);
  for (const auto& x : g->initial_invariants()) CHECK(reynolds(*g, x) == x);
  CHECK_FALSE(is_invariant(*g, f));
}

TEST_CASE("eigen frame normalization") {
  for (const auto& s : supported_groups()) {
    CAPTURE(to_string(s));
    const auto g = build_group(s);
    const Matrix c = coxeter_element(*g);
    const EigenFrame fr = standard_frame(*g);
    const int n = g->rank();
    const auto un = static_cast<std::size_t>(n);
    Vector zq = fr.q;
    for (auto& x : zq) x *= fr.zeta;
    CHECK(c * fr.q == zq);
    const Matrix zc = fr.z_basis * c;
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t j = 0; j < un; ++j)
        CHECK(zc(a, j) == pow(fr.zeta, 1 - g->degrees()[static_cast<int>(a)]) * fr.z_basis(a, j));
    CHECK((fr.z_basis * fr.z_inverse).is_identity());
    for (std::size_t a = 0; a < un; ++a) {
      CHECK(fr.q_z[a] == CycScalar(a + 1 == un ? 1 : 0));
      for (std::size_t b = 0; b < un; ++b) CHECK(fr.dual_gram(a, b) == CycScalar(a + b + 1 == un ? 1 : 0));
    }
    // dual_gram is z B^{-1} z^T / kappa
    CHECK(fr.z_basis * g->gram_inverse() * fr.z_basis.transpose() == fr.kappa * fr.dual_gram);
  }
}
