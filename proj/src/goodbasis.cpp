#include "refrob/goodbasis.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace refrob {

namespace {

std::vector<MultiPoly> to_z(const std::vector<MultiPoly>& root, const EigenFrame& frame) {
  std::vector<MultiPoly> out;
  out.reserve(root.size());
  for (const auto& f : root) out.push_back(to_z_coords(f, frame));
  return out;
}

std::vector<MultiPoly> shift_images(const Vector& q_z) {
  const int n = static_cast<int>(q_z.size());
  std::vector<MultiPoly> gs;
  for (int i = 0; i < n; ++i)
    gs.push_back(MultiPoly::variable(n, i) + MultiPoly::constant(n, q_z[static_cast<std::size_t>(i)]));
  return gs;
}

MultiPoly from_coefficients(int n, const std::vector<ExpVec>& monos, const Vector& c) {
  std::vector<MultiPoly::Term> terms;
  for (std::size_t i = 0; i < monos.size(); ++i)
    if (!c[i].is_zero()) terms.emplace_back(monos[i], c[i]);
  return MultiPoly::from_terms(n, std::move(terms));
}

std::string vector_string(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

// rank of the coefficient matrix of `polys` over the union of their monomials
std::size_t span_rank(const std::vector<const MultiPoly*>& polys) {
  if (polys.empty()) return 0;
  std::vector<ExpVec> monos;
  {
    std::set<ExpVec> all;
    for (const auto* p : polys)
      for (const auto& t : p->terms()) all.insert(t.first);
    monos.assign(all.rbegin(), all.rend());
  }
  Matrix m(polys.size(), monos.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = 0; j < monos.size(); ++j) m(i, j) = polys[i]->coeff(monos[j]);
  return rank(m);
}

}  // namespace

// ---------------------------------------------------------------------------
// Triplets

Report check_admissible(const ReflectionGroup& group, const Matrix& g, const CycScalar& zeta, const Vector& q,
                        const std::vector<MultiPoly>& invs) {
  Report r;
  const auto n = static_cast<std::size_t>(group.rank());
  const auto& d = group.degrees();
  const int h = d.back();

  {
    std::string detail;
    if (g.rows() != n || g.cols() != n || q.size() != n) {
      detail = "dimension mismatch";
    } else {
      const Vector gq = g * std::span<const CycScalar>(q);
      for (std::size_t i = 0; i < n && detail.empty(); ++i)
        if (!(gq[i] == zeta * q[i])) detail = "g q = " + vector_string(gq) + " but zeta q = " + vector_string(q) + " * " + zeta.to_string();
      if (detail.empty() && !pow(zeta, h).is_one()) detail = "zeta^" + std::to_string(h) + " != 1";
      for (int k = 1; k < h && detail.empty(); ++k)
        if (h % k == 0 && pow(zeta, k).is_one()) detail = "zeta has order " + std::to_string(k) + " < " + std::to_string(h);
    }
    r.add("eigenvector", detail.empty(), detail);
  }
  {
    std::string detail;
    if (invs.size() != n || q.size() != n) {
      detail = "dimension mismatch";
    } else {
      Matrix jac(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i) jac(a, i) = evaluate(derive(invs[a], static_cast<int>(i)), q);
      if (determinant(jac).is_zero()) detail = "Jacobian of the basic invariants is singular at q = " + vector_string(q);
    }
    r.add("regular", detail.empty(), detail);
  }
  {
    std::string detail;
    if (g.rows() != n || g.cols() != n) {
      detail = "dimension mismatch";
    } else {
      // prod_alpha (t - zeta^{1 - d_alpha}), constant term first
      Vector expected{CycScalar(1)};
      for (int a = 0; a < static_cast<int>(n); ++a) {
        const CycScalar root = pow(zeta, 1 - d[a]);
        Vector next(expected.size() + 1);
        for (std::size_t k = 0; k < expected.size(); ++k) {
          next[k + 1] += expected[k];
          next[k] -= root * expected[k];
        }
        expected = std::move(next);
      }
      const Vector actual = charpoly(g);
      if (!(actual == expected)) {
        detail = "characteristic polynomial " + vector_string(actual) + " != " + vector_string(expected);
      }
    }
    r.add("spectrum", detail.empty(), detail);
  }
  return r;
}

AdmissibleTriplet make_triplet(GroupPtr group, const Matrix& g, const CycScalar& zeta, const std::optional<Vector>& q) {
  if (!group) throw TripletError("make_triplet: null group");
  AdmissibleTriplet t{group, g, zeta, {}, {}};
  try {
    t.frame = eigen_frame(*group, g, zeta, q);
  } catch (const GroupError& e) {
    throw TripletError(std::string("triplet is not admissible: ") + e.what());
  }
  t.q = t.frame.q;
  const Report r = check_admissible(*group, g, zeta, t.q, group->initial_invariants());
  if (!r.passed()) {
    std::string msg = "triplet is not admissible:";
    for (const auto& c : r.checks())
      if (!c.passed) msg += " [" + c.name + "] " + c.detail;
    throw TripletError(msg);
  }
  return t;
}

AdmissibleTriplet standard_triplet(GroupPtr group) {
  const Matrix g = coxeter_element(*group);
  const CycScalar z = zeta(group->coxeter_number(), 1);
  return make_triplet(std::move(group), g, z);
}

AdmissibleTriplet transform_triplet(const AdmissibleTriplet& t, const TripletAction& action) {
  const auto& group = *t.group;
  const auto n = static_cast<std::size_t>(group.rank());
  if (const auto* c = std::get_if<Conjugate>(&action)) {
    Matrix h = Matrix::identity(n);
    for (int w : c->word) {
      if (w < 0 || w >= static_cast<int>(n)) throw TripletError("conjugating word uses an unknown generator");
      h = h * group.simple_reflections()[static_cast<std::size_t>(w)];
    }
    const Matrix g2 = h * t.g * inverse(h);
    return make_triplet(t.group, g2, t.zeta, h * std::span<const CycScalar>(t.q));
  }
  if (const auto* s = std::get_if<Scale>(&action)) {
    if (s->s.is_zero()) throw TripletError("cannot rescale q by zero");
    Vector q2 = t.q;
    for (auto& x : q2) x *= s->s;
    return make_triplet(t.group, t.g, t.zeta, q2);
  }
  const int r = std::get<Power>(action).r;
  const int h = group.coxeter_number();
  if (std::gcd(r, h) != 1) {
    throw TripletError("power " + std::to_string(r) + " is not coprime to d_n = " + std::to_string(h));
  }
  return make_triplet(t.group, power(t.g, r), pow(t.zeta, r), t.q);
}

// ---------------------------------------------------------------------------
// Taylor data

TaylorExpansion::TaylorExpansion(const AdmissibleTriplet& t, std::vector<MultiPoly> invariants_z, int max_weight)
    : d_(t.group->degrees()), max_weight_(max_weight), n_(t.group->rank()) {
  if (static_cast<int>(invariants_z.size()) != n_) throw TripletError("TaylorExpansion: need n invariants");
  const auto gs = shift_images(t.frame.q_z);
  for (const auto& x : invariants_z) {
    MultiPoly s = compose_truncated(x, gs, d_, max_weight_);
    const CycScalar value = s.coeff(ExpVec(n_));
    values_.push_back(value);
    shifted_.push_back(s - MultiPoly::constant(n_, value));
  }
}

const MultiPoly& TaylorExpansion::shifted_power(const ExpVec& a) {
  if (d_.dot(a) > max_weight_) throw TripletError("shifted_power: weight above the truncation bound");
  auto it = powers_.find(a.packed());
  if (it != powers_.end()) return it->second;
  MultiPoly value(n_);
  if (a.total_degree() == 0) {
    value = MultiPoly::constant(n_, 1);
  } else {
    int i = 0;
    while (a[i] == 0) ++i;
    const ExpVec rest = a - ExpVec::unit(n_, i);
    const MultiPoly prev = shifted_power(rest);
    value = mul_truncated(prev, shifted_[static_cast<std::size_t>(i)], d_, max_weight_);
  }
  return powers_.emplace(a.packed(), std::move(value)).first->second;
}

MultiPoly TaylorExpansion::psi_monomial(const ExpVec& a) { return weighted_part(shifted_power(a), d_, d_.dot(a)); }

MultiPoly phi(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, const MultiPoly& f) {
  const int n = t.group->rank();
  if (f.nvars() != n || static_cast<int>(invariants_z.size()) != n) throw TripletError("phi: dimension mismatch");
  const auto gs = shift_images(t.frame.q_z);
  std::vector<MultiPoly> shifted;
  for (const auto& x : invariants_z) {
    MultiPoly s = compose(x, gs);
    shifted.push_back(s - MultiPoly::constant(n, s.coeff(ExpVec(n))));
  }
  return compose(f, shifted);
}

MultiPoly phi(const AdmissibleTriplet& t, const MultiPoly& f) {
  return phi(t, to_z(t.group->initial_invariants(), t.frame), f);
}

MultiPoly psi(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, const MultiPoly& f) {
  const auto& d = t.group->degrees();
  const auto j = homogeneous_weight(f, d);
  if (!j) throw TripletError("psi: argument is not weighted-homogeneous in the basic invariants");
  TaylorExpansion ex(t, invariants_z, *j);
  PolyBuilder out(t.group->rank());
  for (const auto& [a, c] : f.terms()) {
    const MultiPoly p = ex.psi_monomial(a);
    for (const auto& [b, cb] : p.terms()) out.add_product(b, c, cb);
  }
  return std::move(out).build();
}

MultiPoly psi(const AdmissibleTriplet& t, const MultiPoly& f) {
  return psi(t, to_z(t.group->initial_invariants(), t.frame), f);
}

Matrix psi_matrix(const AdmissibleTriplet& t, const std::vector<MultiPoly>& invariants_z, int j) {
  const int n = t.group->rank();
  const auto& d = t.group->degrees();
  const auto monos = monomials_of_weight(n, d, j);
  TaylorExpansion ex(t, invariants_z, std::max(j, 0));
  Matrix m(monos.size(), monos.size());
  for (std::size_t col = 0; col < monos.size(); ++col) {
    const MultiPoly p = ex.psi_monomial(monos[col]);
    for (std::size_t row = 0; row < monos.size(); ++row) m(row, col) = p.coeff(monos[row]);
  }
  return m;
}

Matrix psi_matrix(const AdmissibleTriplet& t, int j) {
  return psi_matrix(t, to_z(t.group->initial_invariants(), t.frame), j);
}

// ---------------------------------------------------------------------------
// Good basis

GoodBasis good_basic_invariants(const AdmissibleTriplet& t) {
  return good_basic_invariants(t, t.group->initial_invariants());
}

GoodBasis good_basic_invariants(const AdmissibleTriplet& t, const std::vector<MultiPoly>& initial_root) {
  const int n = t.group->rank();
  const auto& d = t.group->degrees();
  if (static_cast<int>(initial_root.size()) != n) throw TripletError("good_basic_invariants: need n invariants");
  const auto initial_z = to_z(initial_root, t.frame);
  TaylorExpansion ex(t, initial_z, d.back());
  GoodBasis out{t, {}, {}, {}, {}};
  for (int alpha = 0; alpha < n; ++alpha) {
    const auto monos = monomials_of_weight(n, d, d[alpha]);
    Matrix m(monos.size(), monos.size());
    for (std::size_t col = 0; col < monos.size(); ++col) {
      const MultiPoly p = ex.psi_monomial(monos[col]);
      for (std::size_t row = 0; row < monos.size(); ++row) m(row, col) = p.coeff(monos[row]);
    }
    Vector rhs(monos.size());
    const ExpVec target = ExpVec::unit(n, alpha);
    for (std::size_t row = 0; row < monos.size(); ++row)
      if (monos[row] == target) rhs[row] = 1;
    std::optional<Vector> c;
    try {
      c = solve(m, rhs);
    } catch (const LinalgError&) {
      c.reset();
    }
    if (!c) {
      throw TripletError("psi matrix in weight " + std::to_string(d[alpha]) + " is singular for " +
                         t.group->name());
    }
    MultiPoly expr = from_coefficients(n, monos, *c);
    out.invariants.push_back(compose(expr, initial_z));
    out.root_invariants.push_back(compose(expr, initial_root));
    out.in_initial.push_back(std::move(expr));
    out.values_at_q.push_back(evaluate(out.invariants.back(), t.frame.q_z));
  }
  return out;
}

Report check_good(const GoodBasis& basis, std::optional<int> max_weight) {
  const auto& t = basis.triplet;
  const int n = t.group->rank();
  const auto& d = t.group->degrees();
  const int h = d.back();
  const int w_max = max_weight.value_or(2 * h);
  TaylorExpansion ex(t, basis.invariants, w_max);

  std::string goodness, compat, delta, congruence, values;
  std::size_t checked = 0;
  for (int w = 1; w <= w_max; ++w) {
    for (const auto& a : monomials_of_weight(n, d, w)) {
      ++checked;
      const MultiPoly& p = ex.shifted_power(a);
      for (const auto& [b, c] : p.terms()) {
        if (((d.dot(b) - w) % h + h) % h != 0 && congruence.empty()) {
          congruence = "a = " + a.to_string() + ", b = " + b.to_string() + ": Taylor coefficient " + c.to_string() +
                       " at weight " + std::to_string(d.dot(b)) + " not congruent to " + std::to_string(w) +
                       " mod " + std::to_string(h);
        }
      }
      const MultiPoly diff = weighted_part(p, d, w) - MultiPoly::monomial(a);
      if (!diff.is_zero() && delta.empty()) {
        delta = "a = " + a.to_string() + ": psi(x^a) - z^a = " + diff.to_string("z");
      }
      if (a.total_degree() == 1) {
        const int alpha = [&a, n] {
          for (int i = 0; i < n; ++i)
            if (a[i] == 1) return i;
          return -1;
        }();
        for (const auto& [b, c] : diff.terms()) {
          if (b.total_degree() >= 2 && goodness.empty()) {
            goodness = "x^" + std::to_string(alpha + 1) + ": coefficient of z^" + b.to_string() + " at q is " +
                       c.to_string() + ", expected 0";
          }
        }
        for (int beta = 0; beta < n; ++beta) {
          const CycScalar j = p.coeff(ExpVec::unit(n, beta));
          const bool ok = beta == alpha ? j.is_one() : j.is_zero();
          if (!ok && compat.empty()) {
            compat = "dx^" + std::to_string(alpha + 1) + "/dz^" + std::to_string(beta + 1) + "(q) = " + j.to_string();
          }
        }
      }
    }
  }
  const Vector& vq = ex.values_at_q();
  for (int alpha = 0; alpha < n && values.empty(); ++alpha) {
    const auto& v = vq[static_cast<std::size_t>(alpha)];
    if (d[alpha] < h && !v.is_zero()) values = "x^" + std::to_string(alpha + 1) + "(q) = " + v.to_string();
    if (d[alpha] == h && v.is_zero()) values = "x^" + std::to_string(alpha + 1) + "(q) = 0";
  }

  Report r;
  r.add("goodness", goodness.empty(), goodness);
  r.add("compatibility", compat.empty(), compat);
  r.add("delta", delta.empty(), delta.empty() ? std::to_string(checked) + " monomials up to weight " + std::to_string(w_max) : delta);
  r.add("congruence", congruence.empty(), congruence);
  r.add("values_at_q", values.empty(), values);
  return r;
}

bool same_good_span(const GoodBasis& b1, const GoodBasis& b2) {
  if (b1.triplet.group->spec() != b2.triplet.group->spec()) return false;
  const auto& d = b1.triplet.group->degrees();
  std::set<int> weights(d.values().begin(), d.values().end());
  for (int w : weights) {
    std::vector<const MultiPoly*> p1, p2, both;
    for (int a = 0; a < d.size(); ++a) {
      if (d[a] != w) continue;
      p1.push_back(&b1.root_invariants[static_cast<std::size_t>(a)]);
      p2.push_back(&b2.root_invariants[static_cast<std::size_t>(a)]);
    }
    both = p1;
    both.insert(both.end(), p2.begin(), p2.end());
    const std::size_t r1 = span_rank(p1);
    if (r1 != span_rank(p2) || r1 != span_rank(both)) return false;
  }
  return true;
}

bool equivalent_triplets(const AdmissibleTriplet& t1, const AdmissibleTriplet& t2) {
  return same_good_span(good_basic_invariants(t1), good_basic_invariants(t2));
}

}  // namespace refrob
