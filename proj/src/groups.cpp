#include "refrob/groups.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "refrob/kernels.hpp"

namespace refrob {

namespace {

struct VectorHash {
  std::size_t operator()(const Vector& v) const {
    std::size_t h = v.size();
    for (const auto& e : v) h ^= e.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

void normalize_first_nonzero(Vector& v) {
  for (const auto& e : v) {
    if (e.is_zero()) continue;
    const CycScalar inv = e.inverse();
    for (auto& x : v) x *= inv;
    return;
  }
}

// The unique (up to scale) solution of v M = lambda v, first nonzero entry 1.
Vector left_eigenvector(const Matrix& m, const CycScalar& lambda, const std::string& what) {
  Matrix shifted = m.transpose();
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= lambda;
  auto ns = nullspace(shifted);
  if (ns.size() != 1) {
    throw GroupError(what + ": eigenspace for " + lambda.to_string() + " has dimension " + std::to_string(ns.size()) +
                     ", expected 1");
  }
  normalize_first_nonzero(ns[0]);
  return ns[0];
}

MultiPoly linear_form(std::span<const CycScalar> row) {
  const int n = static_cast<int>(row.size());
  std::vector<MultiPoly::Term> terms;
  for (int i = 0; i < n; ++i)
    if (!row[static_cast<std::size_t>(i)].is_zero()) terms.emplace_back(ExpVec::unit(n, i), row[static_cast<std::size_t>(i)]);
  return MultiPoly::from_terms(n, std::move(terms));
}

// e_1..e_k of the given polynomials.
std::vector<MultiPoly> elementary_symmetric(const std::vector<MultiPoly>& xs, int nvars) {
  std::vector<MultiPoly> e(xs.size() + 1, MultiPoly(nvars));
  e[0] = MultiPoly::constant(nvars, 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += xs[i] * e[k - 1];
  return e;
}

// Gradient of f at point, paired with column `col` of z_inverse: df/dz^col (point).
CycScalar z_partial_at(const MultiPoly& f, const EigenFrame& frame, std::size_t col) {
  CycScalar sum;
  for (int i = 0; i < f.nvars(); ++i) {
    const auto& c = frame.z_inverse(static_cast<std::size_t>(i), col);
    if (c.is_zero()) continue;
    sum += evaluate(derive(f, i), frame.q) * c;
  }
  return sum;
}

// Orbit of a row vector (linear form) under right multiplication by the generators.
std::vector<Vector> form_orbit(const ReflectionGroup& group, const Vector& row) {
  std::vector<Vector> orbit{row};
  std::unordered_set<Vector, VectorHash> seen{row};
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& s : group.simple_reflections()) {
      Vector next = left_multiply(orbit[i], s);
      if (seen.insert(next).second) orbit.push_back(std::move(next));
    }
    if (orbit.size() > group.element_cap()) throw GroupError("linear-form orbit exceeds the element cap");
  }
  return orbit;
}

// Reynolds image of y_j^k, computed as the average of (r . y)^k over the orbit of e_j.
MultiPoly averaged_power(const ReflectionGroup& group, int j, int k) {
  const int n = group.rank();
  Vector row(static_cast<std::size_t>(n));
  row[static_cast<std::size_t>(j)] = 1;
  const auto orbit = form_orbit(group, row);
  MultiPoly sum(n);
  for (const auto& r : orbit) sum += linear_form_power(r, k);
  return sum * CycScalar(Rational(1, static_cast<long>(orbit.size())));
}

std::vector<MultiPoly> classical_invariants(const ReflectionGroup& group, const EigenFrame& frame) {
  const int n = group.rank();
  const auto& spec = group.spec();
  auto y = [n](int i) { return MultiPoly::variable(n, i); };
  std::vector<MultiPoly> out;
  switch (spec.family) {
    case Family::A: {
      std::vector<MultiPoly> ell;
      for (int k = 0; k <= n; ++k) {
        MultiPoly l(n);
        if (k < n) l += y(k);
        if (k > 0) l -= y(k - 1);
        ell.push_back(std::move(l));
      }
      auto e = elementary_symmetric(ell, n);
      for (int k = 2; k <= n + 1; ++k) out.push_back(e[static_cast<std::size_t>(k)]);
      break;
    }
    case Family::B: {
      const CycScalar sqrt2 = group.at_conductor(cos_pi_over(4) * CycScalar(2));
      std::vector<MultiPoly> squares;
      for (int k = 0; k < n; ++k) {
        MultiPoly l = k < n - 1 ? y(k) : y(k) * sqrt2;
        if (k > 0) l -= y(k - 1);
        squares.push_back(l * l);
      }
      auto e = elementary_symmetric(squares, n);
      for (int k = 1; k <= n; ++k) out.push_back(e[static_cast<std::size_t>(k)]);
      break;
    }
    case Family::D: {
      std::vector<MultiPoly> ell;
      for (int k = 0; k < n - 2; ++k) ell.push_back(k > 0 ? y(k) - y(k - 1) : y(k));
      ell.push_back(y(n - 2) - y(n - 3) + y(n - 1));
      ell.push_back(y(n - 1) - y(n - 2));
      std::vector<MultiPoly> squares;
      MultiPoly prod = MultiPoly::constant(n, 1);
      for (const auto& l : ell) {
        squares.push_back(l * l);
        prod *= l;
      }
      auto e = elementary_symmetric(squares, n);
      for (int k = 1; k < n; ++k) out.push_back(e[static_cast<std::size_t>(k)]);
      out.push_back(prod);
      std::stable_sort(out.begin(), out.end(), [](const MultiPoly& a, const MultiPoly& b) {
        return a.total_degree() < b.total_degree();
      });
      break;
    }
    case Family::I2: {
      // u = I(conj(q), .) and v = u o s_1 are the two eigenforms.
      Vector qbar;
      for (const auto& c : frame.q) qbar.push_back(c.conj());
      const Vector u_row = left_multiply(qbar, group.gram());
      const Vector v_row = left_multiply(u_row, group.simple_reflections()[0]);
      const MultiPoly u = linear_form(u_row);
      const MultiPoly v = linear_form(v_row);
      out.push_back(u * v);
      out.push_back(u.pow(spec.m) + v.pow(spec.m));
      break;
    }
    default:
      break;
  }
  return out;
}

std::vector<MultiPoly> reynolds_invariants(const ReflectionGroup& group, const EigenFrame& frame) {
  const int n = group.rank();
  const auto& d = group.degrees();
  std::vector<MultiPoly> out;
  for (int alpha = 0; alpha < n; ++alpha) {
    const int k = d[alpha];
    bool found = false;
    for (const auto& seed : monomials_of_degree(n, k)) {
      int pure = -1;
      for (int i = 0; i < n; ++i)
        if (seed[i] == k) pure = i;
      MultiPoly candidate = pure >= 0 ? averaged_power(group, pure, k) : reynolds(group, MultiPoly::monomial(seed));
      if (candidate.is_zero()) continue;
      if (z_partial_at(candidate, frame, static_cast<std::size_t>(alpha)).is_zero()) continue;
      out.push_back(std::move(candidate));
      found = true;
      break;
    }
    if (!found) {
      throw GroupError("no seed of degree " + std::to_string(k) + " gives an independent invariant for " +
                       group.name());
    }
  }
  return out;
}

void check_invariants(const ReflectionGroup& group, const std::vector<MultiPoly>& invs, const EigenFrame& frame) {
  const auto n = static_cast<std::size_t>(group.rank());
  if (invs.size() != n) throw GroupError("wrong number of basic invariants for " + group.name());
  Matrix jac(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    if (homogeneous_weight(invs[a], WeightVec(std::vector<int>(n, 1))) != group.degrees()[static_cast<int>(a)]) {
      throw GroupError("basic invariant " + std::to_string(a + 1) + " of " + group.name() + " has the wrong degree");
    }
    if (!is_invariant(group, invs[a])) {
      throw GroupError("basic invariant " + std::to_string(a + 1) + " of " + group.name() + " is not invariant");
    }
    for (std::size_t b = 0; b < n; ++b) jac(a, b) = z_partial_at(invs[a], frame, b);
  }
  if (determinant(jac).is_zero()) {
    throw GroupError("basic invariants of " + group.name() + " fail the Jacobian certificate at q");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog

std::string family_name(Family f) {
  switch (f) {
    case Family::A:
      return "A";
    case Family::B:
      return "B";
    case Family::D:
      return "D";
    case Family::I2:
      return "I2";
    case Family::H3:
      return "H3";
    case Family::F4:
      return "F4";
  }
  return "?";
}

std::string to_string(const GroupSpec& spec) {
  switch (spec.family) {
    case Family::I2:
      return "I2(" + std::to_string(spec.m) + ")";
    case Family::H3:
    case Family::F4:
      return family_name(spec.family);
    default:
      return family_name(spec.family) + std::to_string(spec.rank);
  }
}

Family parse_family(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (s == "A") return Family::A;
  if (s == "B" || s == "C") return Family::B;
  if (s == "D") return Family::D;
  if (s == "I2" || s == "I") return Family::I2;
  if (s == "H3") return Family::H3;
  if (s == "F4" || s == "F") return Family::F4;
  if (s == "H" || s == "H4") {
    throw UnsupportedGroup("H4 is not supported: Reynolds averaging over its 14400 elements at degree 30 is out of budget");
  }
  if (!s.empty() && s[0] == 'E') {
    throw UnsupportedGroup("type E groups are not in the supported catalog");
  }
  throw UnsupportedGroup("unknown group family '" + name + "'");
}

void validate(const GroupSpec& spec) {
  const int n = spec.rank;
  switch (spec.family) {
    case Family::A:
      if (n < 2 || n > 6) throw UnsupportedGroup("A_n is supported for 2 <= n <= 6, got n = " + std::to_string(n));
      return;
    case Family::B:
      if (n < 2 || n > 6) throw UnsupportedGroup("B_n is supported for 2 <= n <= 6, got n = " + std::to_string(n));
      return;
    case Family::D:
      if (n % 2 == 0) {
        throw UnsupportedGroup("D" + std::to_string(n) +
                               " is not supported: for even n the degree n is repeated, and normalizing the dual "
                               "Gram matrix on that two-dimensional eigenblock needs an isotropic basis that may "
                               "require a quadratic extension of Q(zeta_N)");
      }
      if (n != 5) throw UnsupportedGroup("the only supported D_n is D5, got n = " + std::to_string(n));
      return;
    case Family::I2:
      if (n != 2) throw UnsupportedGroup("I2(m) has rank 2");
      if (spec.m < 3 || spec.m > 12) {
        throw UnsupportedGroup("I2(m) is supported for 3 <= m <= 12, got m = " + std::to_string(spec.m));
      }
      return;
    case Family::H3:
      if (n != 3) throw UnsupportedGroup("H3 has rank 3");
      return;
    case Family::F4:
      if (n != 4) throw UnsupportedGroup("F4 has rank 4");
      return;
  }
  throw UnsupportedGroup("unknown family");
}

bool is_supported(const GroupSpec& spec) {
  try {
    validate(spec);
    return true;
  } catch (const UnsupportedGroup&) {
    return false;
  }
}

std::vector<GroupSpec> supported_groups() {
  std::vector<GroupSpec> out;
  for (int n = 2; n <= 6; ++n) out.push_back({Family::A, n, 0});
  for (int n = 2; n <= 6; ++n) out.push_back({Family::B, n, 0});
  out.push_back({Family::D, 5, 0});
  for (int m = 3; m <= 12; ++m) out.push_back({Family::I2, 2, m});
  out.push_back({Family::H3, 3, 0});
  out.push_back({Family::F4, 4, 0});
  return out;
}

WeightVec degrees_of(const GroupSpec& spec) {
  validate(spec);
  const int n = spec.rank;
  std::vector<int> d;
  switch (spec.family) {
    case Family::A:
      for (int k = 2; k <= n + 1; ++k) d.push_back(k);
      break;
    case Family::B:
      for (int k = 1; k <= n; ++k) d.push_back(2 * k);
      break;
    case Family::D:
      for (int k = 1; k < n; ++k) d.push_back(2 * k);
      d.push_back(n);
      std::sort(d.begin(), d.end());
      break;
    case Family::I2:
      d = {2, spec.m};
      break;
    case Family::H3:
      d = {2, 6, 10};
      break;
    case Family::F4:
      d = {2, 6, 8, 12};
      break;
  }
  return WeightVec(std::move(d));
}

std::vector<std::vector<int>> coxeter_matrix(const GroupSpec& spec) {
  validate(spec);
  const auto n = static_cast<std::size_t>(spec.rank);
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  auto edge = [&m](std::size_t i, std::size_t j, int label) { m[i][j] = m[j][i] = label; };
  switch (spec.family) {
    case Family::A:
      for (std::size_t i = 0; i + 1 < n; ++i) edge(i, i + 1, 3);
      break;
    case Family::B:
      for (std::size_t i = 0; i + 1 < n; ++i) edge(i, i + 1, i + 2 == n ? 4 : 3);
      break;
    case Family::D:
      for (std::size_t i = 0; i + 3 < n; ++i) edge(i, i + 1, 3);
      edge(n - 3, n - 2, 3);
      edge(n - 3, n - 1, 3);
      break;
    case Family::I2:
      edge(0, 1, spec.m);
      break;
    case Family::H3:
      edge(0, 1, 5);
      edge(1, 2, 3);
      break;
    case Family::F4:
      edge(0, 1, 3);
      edge(1, 2, 4);
      edge(2, 3, 3);
      break;
  }
  return m;
}

int conductor_of(const GroupSpec& spec) {
  const auto m = coxeter_matrix(spec);
  int label = 2;
  for (const auto& row : m)
    for (int x : row) label = std::max(label, x);
  return std::lcm(degrees_of(spec).back(), 2 * label);
}

Integer order_of(const GroupSpec& spec) {
  Integer out = 1;
  const WeightVec d = degrees_of(spec);
  for (int k : d.values()) out *= k;
  return out;
}

// ---------------------------------------------------------------------------
// ReflectionGroup

CycScalar ReflectionGroup::at_conductor(const CycScalar& a) const {
  if (a.is_rational() || a.conductor() == conductor_) return a;
  return lift_conductor(a, conductor_);
}

GroupPtr ReflectionGroup::build(const GroupSpec& spec, std::size_t element_cap) { return build_group(spec, element_cap); }

GroupPtr build_group(const GroupSpec& spec, std::size_t element_cap) {
  validate(spec);
  std::shared_ptr<ReflectionGroup> g(new ReflectionGroup());
  g->spec_ = spec;
  g->degrees_ = degrees_of(spec);
  g->conductor_ = conductor_of(spec);
  if (g->conductor_ > conductor_cap()) {
    throw ConductorOverflow(to_string(spec) + " needs conductor " + std::to_string(g->conductor_) +
                            ", above the conductor cap " + std::to_string(conductor_cap()));
  }
  g->element_cap_ = element_cap;

  const auto m = coxeter_matrix(spec);
  const auto n = static_cast<std::size_t>(spec.rank);
  g->gram_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        g->gram_(i, j) = 1;
      } else if (m[i][j] != 2) {
        g->gram_(i, j) = g->at_conductor(-cos_pi_over(m[i][j]));
      }
    }
  g->gram_inverse_ = inverse(g->gram_);

  for (std::size_t i = 0; i < n; ++i) {
    Matrix s = Matrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) s(i, j) -= CycScalar(2) * g->gram_(i, j);
    if (!(s * s).is_identity()) throw GroupError("simple reflection is not an involution");
    if (!(s.transpose() * g->gram_ * s == g->gram_)) throw GroupError("simple reflection does not preserve B");
    g->reflections_.push_back(std::move(s));
  }

  const EigenFrame frame = standard_frame(*g);
  if (spec.family == Family::H3 || spec.family == Family::F4) {
    g->invariants_ = reynolds_invariants(*g, frame);
  } else {
    g->invariants_ = classical_invariants(*g, frame);
  }
  check_invariants(*g, g->invariants_, frame);
  return g;
}

const std::vector<Matrix>& ReflectionGroup::elements() const {
  std::call_once(elements_once_, [this] {
    const Integer expected = order();
    if (expected > static_cast<unsigned long>(element_cap_)) {
      elements_error_ = name() + " has " + expected.get_str() + " elements, above the element cap " +
                        std::to_string(element_cap_);
      return;
    }
    const std::size_t n = reflections_.size();
    std::unordered_set<Matrix, MatrixHash> seen;
    elements_.push_back(Matrix::identity(n));
    seen.insert(elements_.back());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      for (const auto& s : reflections_) {
        Matrix next = elements_[i] * s;
        if (seen.insert(next).second) elements_.push_back(std::move(next));
      }
      if (elements_.size() > element_cap_) {
        elements_error_ = "group closure exceeds the element cap " + std::to_string(element_cap_);
        elements_.clear();
        return;
      }
    }
    if (expected != static_cast<unsigned long>(elements_.size())) {
      elements_error_ = "closure of " + name() + " has " + std::to_string(elements_.size()) +
                        " elements, expected the product of degrees " + expected.get_str();
      elements_.clear();
      return;
    }
    elements_ok_ = true;
  });
  if (!elements_ok_) throw GroupError(elements_error_);
  return elements_;
}

bool ReflectionGroup::elements_materialized() const { return elements_ok_; }

Matrix coxeter_element(const ReflectionGroup& group) {
  Matrix g = Matrix::identity(static_cast<std::size_t>(group.rank()));
  for (const auto& s : group.simple_reflections()) g = g * s;
  return g;
}

EigenFrame eigen_frame(const ReflectionGroup& group, const Matrix& g, const CycScalar& zeta,
                       const std::optional<Vector>& q) {
  const auto n = static_cast<std::size_t>(group.rank());
  const auto& d = group.degrees();
  EigenFrame f;
  f.zeta = zeta;

  if (q) {
    if (q->size() != n) throw GroupError("eigen_frame: q has the wrong dimension");
    f.q = *q;
  } else {
    Matrix shifted = g;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= zeta;
    auto ns = nullspace(shifted);
    if (ns.size() != 1) {
      throw GroupError("eigen_frame: the " + zeta.to_string() + "-eigenspace of g has dimension " +
                       std::to_string(ns.size()) + ", expected 1");
    }
    normalize_first_nonzero(ns[0]);
    f.q = std::move(ns[0]);
  }

  std::vector<Vector> rows;
  for (std::size_t a = 0; a < n; ++a) {
    rows.push_back(left_eigenvector(g, pow(zeta, 1 - d[static_cast<int>(a)]), "eigen_frame"));
  }

  const Matrix& binv = group.gram_inverse();
  auto raw_pairing = [&binv](const Vector& r, const Vector& s) { return dot(left_multiply(r, binv), s); };
  if (n % 2 == 1) {
    f.kappa = raw_pairing(rows[n / 2], rows[n / 2]);
  } else {
    Vector qbar;
    for (const auto& c : f.q) qbar.push_back(c.conj());
    const CycScalar iq = dot(left_multiply(qbar, group.gram()), f.q);
    if (iq.is_zero()) throw GroupError("eigen_frame: I(conj(q), q) vanishes");
    f.kappa = iq.inverse();
  }
  if (f.kappa.is_zero()) throw GroupError("eigen_frame: self-paired eigenform is isotropic");
  const CycScalar inv_kappa = f.kappa.inverse();
  auto pairing = [&](const Vector& r, const Vector& s) { return raw_pairing(r, s) * inv_kappa; };
  auto scale = [](Vector& r, const CycScalar& c) {
    if (c.is_zero()) throw GroupError("eigen_frame: dual Gram normalization hit a zero pairing");
    const CycScalar inv = c.inverse();
    for (auto& x : r) x *= inv;
  };

  scale(rows[n - 1], dot(rows[n - 1], f.q));
  scale(rows[0], pairing(rows[0], rows[n - 1]));
  for (std::size_t a = 1; a < n; ++a) {
    const std::size_t b = n - 1 - a;
    if (a < b) scale(rows[b], pairing(rows[a], rows[b]));
  }

  f.z_basis = Matrix::from_rows(rows);
  f.z_inverse = inverse(f.z_basis);
  f.dual_gram = inv_kappa * (f.z_basis * binv * f.z_basis.transpose());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const bool anti = a + b == n - 1;
      if (anti ? !f.dual_gram(a, b).is_one() : !f.dual_gram(a, b).is_zero()) {
        throw GroupError("eigen_frame: dual Gram matrix could not be normalized to the antidiagonal unit for " +
                         group.name());
      }
    }
  f.q_z = f.z_basis * std::span<const CycScalar>(f.q);
  return f;
}

EigenFrame standard_frame(const ReflectionGroup& group) {
  return eigen_frame(group, coxeter_element(group), zeta(group.coxeter_number(), 1));
}

const std::vector<MultiPoly>& initial_basic_invariants(const ReflectionGroup& group) {
  return group.initial_invariants();
}

MultiPoly reynolds(const ReflectionGroup& group, const MultiPoly& f) {
  const auto& elems = group.elements();
  return kernels::orbit_sum(f, elems) * CycScalar(Rational(1, static_cast<long>(elems.size())));
}

bool is_invariant(const ReflectionGroup& group, const MultiPoly& f) {
  for (const auto& s : group.simple_reflections())
    if (!(subst_linear(f, s) == f)) return false;
  return true;
}

MultiPoly to_z_coords(const MultiPoly& f, const EigenFrame& frame) { return subst_linear(f, frame.z_inverse); }

std::optional<long> matrix_order(const Matrix& m, long limit) {
  Matrix p = m;
  for (long k = 1; k <= limit; ++k) {
    if (p.is_identity()) return k;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace refrob
