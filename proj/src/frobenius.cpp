#include "refrob/frobenius.hpp"

#include <string>

namespace refrob {

namespace {

constexpr std::size_t kMaxDetail = 4000;

std::string clip(std::string s) {
  if (s.size() > kMaxDetail) s = s.substr(0, kMaxDetail) + " ...";
  return s;
}

std::string idx(std::initializer_list<int> is) {
  std::string s = "(";
  bool first = true;
  for (int i : is) {
    s += (first ? "" : ",") + std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

CycScalar rational(long num, long den) { return CycScalar(Rational(num, den)); }

MultiPoly x_var(int n, int i) { return MultiPoly::variable(n, i); }

// Keeps the first failure of a check.
void note(std::string& slot, const std::string& what) {
  if (slot.empty()) slot = clip(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rewriting

InvariantRewriter::InvariantRewriter(const GoodBasis& basis)
    : basis_(basis), taylor_(basis.triplet, basis.invariants, 2 * basis.triplet.group->degrees().back()) {}

const MultiPoly& InvariantRewriter::expand(const ExpVec& a) {
  auto it = expanded_.find(a.packed());
  if (it != expanded_.end()) return it->second;
  const int n = a.size();
  MultiPoly value(n);
  if (a.total_degree() == 0) {
    value = MultiPoly::constant(n, 1);
  } else {
    int i = 0;
    while (a[i] == 0) ++i;
    const MultiPoly prev = expand(a - ExpVec::unit(n, i));
    value = prev * basis_.invariants[static_cast<std::size_t>(i)];
  }
  return expanded_.emplace(a.packed(), std::move(value)).first->second;
}

MultiPoly InvariantRewriter::rewrite(const MultiPoly& f) {
  const auto& t = basis_.triplet;
  const int n = t.group->rank();
  const auto& d = t.group->degrees();
  if (f.nvars() != n) throw FrobeniusError("rewrite_in_invariants: wrong number of variables");
  if (f.is_zero()) return MultiPoly(n);
  const int deg = f.total_degree();
  for (const auto& term : f.terms())
    if (term.first.total_degree() != deg) throw FrobeniusError("rewrite_in_invariants: argument is not homogeneous");

  const auto monos = monomials_of_weight(n, d, deg);
  MultiPoly result(n);
  if (!monos.empty()) {
    TaylorExpansion local(t, basis_.invariants, deg);
    TaylorExpansion& ex = deg <= taylor_.max_weight() ? taylor_ : local;
    std::vector<MultiPoly> gs;
    for (int i = 0; i < n; ++i)
      gs.push_back(MultiPoly::variable(n, i) + MultiPoly::constant(n, t.frame.q_z[static_cast<std::size_t>(i)]));
    const MultiPoly target = weighted_part(compose_truncated(f, gs, d, deg), d, deg);
    Matrix m(monos.size(), monos.size());
    Vector rhs(monos.size());
    for (std::size_t col = 0; col < monos.size(); ++col) {
      const MultiPoly p = ex.psi_monomial(monos[col]);
      for (std::size_t row = 0; row < monos.size(); ++row) m(row, col) = p.coeff(monos[row]);
      rhs[col] = target.coeff(monos[col]);
    }
    std::optional<Vector> c;
    try {
      c = solve(m, rhs);
    } catch (const LinalgError& e) {
      throw FrobeniusError(std::string("rewrite_in_invariants: ") + e.what());
    }
    if (c) {
      std::vector<MultiPoly::Term> terms;
      for (std::size_t i = 0; i < monos.size(); ++i)
        if (!(*c)[i].is_zero()) terms.emplace_back(monos[i], (*c)[i]);
      result = MultiPoly::from_terms(n, std::move(terms));
    }
  }
  MultiPoly residual = f;
  for (const auto& [a, c] : result.terms()) residual -= expand(a) * c;
  if (!residual.is_zero()) {
    throw FrobeniusError("rewrite_in_invariants: nonzero residual " + clip(residual.to_string("z")));
  }
  return result;
}

MultiPoly rewrite_in_invariants(const GoodBasis& basis, const MultiPoly& f) {
  InvariantRewriter rw(basis);
  return rw.rewrite(f);
}

// ---------------------------------------------------------------------------
// Intersection form and metric

PolyMatrix intersection_form(const GoodBasis& basis) {
  const int n = basis.triplet.group->rank();
  const auto un = static_cast<std::size_t>(n);
  const Matrix& dg = basis.triplet.frame.dual_gram;
  std::vector<std::vector<MultiPoly>> grads(un);
  for (std::size_t a = 0; a < un; ++a)
    for (int g = 0; g < n; ++g) grads[a].push_back(derive(basis.invariants[a], g));

  InvariantRewriter rw(basis);
  PolyMatrix out(un, std::vector<MultiPoly>(un, MultiPoly(n)));
  for (std::size_t a = 0; a < un; ++a)
    for (std::size_t b = a; b < un; ++b) {
      MultiPoly sum(n);
      for (std::size_t g1 = 0; g1 < un; ++g1)
        for (std::size_t g2 = 0; g2 < un; ++g2) {
          if (dg(g1, g2).is_zero()) continue;
          sum += grads[a][g1] * grads[b][g2] * dg(g1, g2);
        }
      out[a][b] = rw.rewrite(sum);
      out[b][a] = out[a][b];
    }
  return out;
}

Report expansion_identity_check(const GoodBasis& basis, const PolyMatrix& intersection) {
  const auto& t = basis.triplet;
  const int n = t.group->rank();
  const auto& d = t.group->degrees();
  const CycScalar xn_q = basis.values_at_q[static_cast<std::size_t>(n - 1)];
  Report r;
  std::string fail;
  int pairs = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      ++pairs;
      MultiPoly rhs(n);
      if (a + b == n - 1) rhs += x_var(n, n - 1) * xn_q.inverse();
      const MultiPoly sum = derive(basis.invariants[static_cast<std::size_t>(a)], n - 1 - b) +
                            derive(basis.invariants[static_cast<std::size_t>(b)], n - 1 - a);
      for (const auto& m : monomials_of_weight(n, d, d[a] + d[b] - 2)) {
        if (m[n - 1] != 0) continue;
        const CycScalar c = taylor_coeff(sum, m, t.frame.q_z);
        if (!c.is_zero()) rhs += MultiPoly::monomial(m, c);
      }
      const MultiPoly diff = intersection[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] - rhs;
      if (!diff.is_zero() && fail.empty()) {
        fail = clip("pair " + idx({a, b}) + ": I* - expansion = " + diff.to_string());
      }
    }
  r.add("expansion_identity", fail.empty(), fail.empty() ? std::to_string(pairs) + " pairs" : fail);
  return r;
}

Report expansion_identity_check(const GoodBasis& basis) {
  return expansion_identity_check(basis, intersection_form(basis));
}

FlatMetric flat_metric(const GoodBasis& basis, const PolyMatrix& intersection) {
  const int n = basis.triplet.group->rank();
  const auto un = static_cast<std::size_t>(n);
  const CycScalar c = basis.values_at_q[un - 1];
  FlatMetric m{Matrix(un, un), {}};
  for (std::size_t a = 0; a < un; ++a)
    for (std::size_t b = 0; b < un; ++b) {
      const MultiPoly p = derive(intersection[a][b] * c, n - 1);
      if (!p.is_constant()) {
        throw FrobeniusError("metric entry g^" + idx({static_cast<int>(a), static_cast<int>(b)}) +
                             " is not constant: " + clip(p.to_string()));
      }
      m.upper(a, b) = p.coeff(ExpVec(n));
    }
  try {
    m.lower = inverse(m.upper);
  } catch (const LinalgError&) {
    throw FrobeniusError("flat metric is degenerate");
  }
  return m;
}

StructureConstants structure_constants(const GoodBasis& basis, const PolyMatrix& intersection,
                                       const FlatMetric& metric) {
  const int n = basis.triplet.group->rank();
  const auto& d = basis.triplet.group->degrees();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& e = metric.lower(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      if (a + b == n - 1 ? !e.is_one() : !e.is_zero()) {
        throw FrobeniusError("structure constants need the antidiagonal unit metric");
      }
    }
  const CycScalar c = basis.values_at_q[static_cast<std::size_t>(n - 1)];
  const int h = d.back();
  StructureConstants out{n, std::vector<MultiPoly>(static_cast<std::size_t>(n * n * n), MultiPoly(n))};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int as = n - 1 - a;
      const int bs = n - 1 - b;
      const MultiPoly scaled = intersection[static_cast<std::size_t>(as)][static_cast<std::size_t>(bs)] *
                               (c * rational(h, d[as] + d[bs] - 2));
      for (int g = 0; g < n; ++g) out(a, b, g) = derive(scaled, n - 1 - g);
    }
  return out;
}

namespace {

// d_mu d_nu F in the flat frame, from the intersection form.
PolyMatrix potential_hessian(const GoodBasis& basis, const PolyMatrix& intersection) {
  const int n = basis.triplet.group->rank();
  const auto& d = basis.triplet.group->degrees();
  const CycScalar c = basis.values_at_q[static_cast<std::size_t>(n - 1)];
  const int h = d.back();
  PolyMatrix hess(static_cast<std::size_t>(n), std::vector<MultiPoly>(static_cast<std::size_t>(n), MultiPoly(n)));
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      const int ms = n - 1 - mu;
      const int ns = n - 1 - nu;
      hess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] =
          intersection[static_cast<std::size_t>(ms)][static_cast<std::size_t>(ns)] * (c * rational(h, d[ms] + d[ns] - 2));
    }
  return hess;
}

}  // namespace

MultiPoly potential(const GoodBasis& basis, const PolyMatrix& intersection, const FlatMetric& metric) {
  (void)metric;
  const int n = basis.triplet.group->rank();
  const auto& d = basis.triplet.group->degrees();
  const int w = 2 * d.back() + 2;
  const PolyMatrix hess = potential_hessian(basis, intersection);
  MultiPoly f(n);
  for (int j = 0; j < n; ++j) {
    MultiPoly grad_j(n);
    for (int i = 0; i < n; ++i)
      grad_j += x_var(n, i) * hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * CycScalar(static_cast<long>(d[i]));
    grad_j *= rational(1, w - d[j]);
    f += x_var(n, j) * grad_j * CycScalar(static_cast<long>(d[j]));
  }
  f *= rational(1, w);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      const MultiPoly diff = derive(derive(f, mu), nu) - hess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)];
      if (!diff.is_zero()) {
        throw FrobeniusError("potential: Hessian entry " + idx({mu, nu}) + " is not integrable, difference " +
                             clip(diff.to_string()));
      }
    }
  return f;
}

std::vector<Rational> euler_field(const WeightVec& degrees) {
  std::vector<Rational> out;
  for (int a = 0; a < degrees.size(); ++a) {
    Rational w(degrees[a], degrees.back());
    w.canonicalize();
    out.push_back(w);
  }
  return out;
}

FrobeniusData build_frobenius(const GoodBasis& basis) {
  FrobeniusData fd;
  fd.basis = basis;
  fd.n = basis.triplet.group->rank();
  fd.degrees = basis.triplet.group->degrees();
  fd.c = basis.values_at_q[static_cast<std::size_t>(fd.n - 1)];
  fd.intersection = intersection_form(basis);
  fd.metric = flat_metric(basis, fd.intersection);
  fd.structure = structure_constants(basis, fd.intersection, fd.metric);
  fd.potential = potential(basis, fd.intersection, fd.metric);
  fd.euler_weights = euler_field(fd.degrees);
  fd.unit_index = fd.n - 1;
  return fd;
}

// ---------------------------------------------------------------------------
// Axioms

Report verify_axioms(const FrobeniusData& fd) {
  const int n = fd.n;
  const auto un = static_cast<std::size_t>(n);
  const auto& d = fd.degrees;
  const int h = d.back();
  const auto& C = fd.structure;
  Report r;

  // lowered tensor C_{abg} = sum_e g_{ge} C_{ab}^e
  std::vector<MultiPoly> lowered(un * un * un, MultiPoly(n));
  auto L = [&](int a, int b, int g) -> MultiPoly& { return lowered[static_cast<std::size_t>((a * n + b) * n + g)]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g)
        for (int e = 0; e < n; ++e) {
          const auto& m = fd.metric.lower(static_cast<std::size_t>(g), static_cast<std::size_t>(e));
          if (!m.is_zero()) L(a, b, g) += C(a, b, e) * m;
        }

  {
    std::string fail;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          if (!(L(a, b, g) == L(b, a, g))) note(fail, "C" + idx({a, b, g}) + " - C" + idx({b, a, g}) + " = " + (L(a, b, g) - L(b, a, g)).to_string());
          if (!(L(a, b, g) == L(a, g, b))) note(fail, "C" + idx({a, b, g}) + " - C" + idx({a, g, b}) + " = " + (L(a, b, g) - L(a, g, b)).to_string());
        }
    r.add("lowered_symmetry", fail.empty(), fail);
  }
  {
    std::string fail;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g)
          for (int e = g + 1; e < n; ++e) {
            const MultiPoly diff = derive(L(a, b, g), e) - derive(L(a, b, e), g);
            if (!diff.is_zero()) note(fail, "d_" + std::to_string(e + 1) + " C" + idx({a, b, g}) + " - d_" + std::to_string(g + 1) + " C" + idx({a, b, e}) + " = " + diff.to_string());
          }
    r.add("potentiality", fail.empty(), fail);
  }
  {
    std::string fail;
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t b = 0; b < un; ++b) {
        const MultiPoly p = derive(fd.intersection[a][b] * fd.c, n - 1);
        if (!p.is_constant()) {
          note(fail, "g^" + idx({static_cast<int>(a), static_cast<int>(b)}) + " = " + p.to_string());
        } else if (!(p.coeff(ExpVec(n)) == fd.metric.upper(a, b))) {
          note(fail, "g^" + idx({static_cast<int>(a), static_cast<int>(b)}) + " differs from the stored metric");
        }
      }
    r.add("metric_constant", fail.empty(), fail);
  }
  {
    std::string fail;
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t b = 0; b < un; ++b) {
        const bool anti = a + b == un - 1;
        for (const Matrix* m : {&fd.metric.upper, &fd.metric.lower}) {
          const auto& e = (*m)(a, b);
          if (anti ? !e.is_one() : !e.is_zero()) note(fail, "metric entry " + idx({static_cast<int>(a), static_cast<int>(b)}) + " = " + e.to_string());
        }
        if (!fd.metric.lower(a, b).is_zero() && d[static_cast<int>(a)] + d[static_cast<int>(b)] != h + 2) {
          note(fail, "g_" + idx({static_cast<int>(a), static_cast<int>(b)}) + " nonzero off weight d_n + 2");
        }
      }
    r.add("metric_antidiagonal", fail.empty(), fail);
  }
  {
    std::string fail;
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g) {
        const MultiPoly expected = b == g ? MultiPoly::constant(n, 1) : MultiPoly(n);
        if (!(C(n - 1, b, g) == expected)) note(fail, "C_" + idx({n - 1, b}) + "^" + std::to_string(g + 1) + " = " + C(n - 1, b, g).to_string());
      }
    r.add("unit", fail.empty(), fail);
  }
  {
    std::string fail;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) {
          const int want = h + d[g] - d[a] - d[b];
          for (const auto& term : C(a, b, g).terms())
            if (d.dot(term.first) != want) note(fail, "C_" + idx({a, b}) + "^" + std::to_string(g + 1) + " has a term of weight " + std::to_string(d.dot(term.first)) + ", expected " + std::to_string(want));
        }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const auto w = homogeneous_weight(fd.intersection[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], d);
        if (!w || (*w != d[a] + d[b] - 2 && !fd.intersection[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].is_zero())) {
          note(fail, "I*" + idx({a, b}) + " is not homogeneous of weight " + std::to_string(d[a] + d[b] - 2));
        }
      }
    const auto wf = homogeneous_weight(fd.potential, d);
    if (!wf || (*wf != 2 * h + 2 && !fd.potential.is_zero())) note(fail, "potential is not homogeneous of weight 2 d_n + 2");
    r.add("euler", fail.empty(), fail);
  }
  {
    std::string fail;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g)
          for (int e = 0; e < n; ++e) {
            MultiPoly lhs(n), rhs(n);
            for (int k = 0; k < n; ++k) {
              if (!C(a, b, k).is_zero() && !C(k, g, e).is_zero()) lhs += C(a, b, k) * C(k, g, e);
              if (!C(b, g, k).is_zero() && !C(a, k, e).is_zero()) rhs += C(b, g, k) * C(a, k, e);
            }
            if (!(lhs == rhs)) note(fail, "(d_" + std::to_string(a + 1) + " o d_" + std::to_string(b + 1) + ") o d_" + std::to_string(g + 1) + " differs in component " + std::to_string(e + 1) + ": " + (lhs - rhs).to_string());
          }
    r.add("associativity", fail.empty(), fail);
  }
  {
    std::string fail;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        MultiPoly lhs(n);
        for (int g = 0; g < n; ++g) {
          const int gs = n - 1 - g;
          lhs += x_var(n, gs) * C(n - 1 - a, n - 1 - b, g) * rational(d[gs], h);
        }
        const MultiPoly diff = lhs - fd.intersection[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * fd.c;
        if (!diff.is_zero()) note(fail, "pair " + idx({a, b}) + ": g(E, .) - c I* = " + diff.to_string());
      }
    r.add("intersection_compatibility", fail.empty(), fail);
  }
  {
    std::string fail;
    const auto& dg = fd.basis.triplet.frame.dual_gram;
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t b = 0; b < un; ++b)
        if (!(dg(a, b) == fd.metric.upper(a, b))) note(fail, "I*(z^" + std::to_string(a + 1) + ", z^" + std::to_string(b + 1) + ") = " + dg(a, b).to_string() + " but g^" + idx({static_cast<int>(a), static_cast<int>(b)}) + " = " + fd.metric.upper(a, b).to_string());
    TaylorExpansion ex(fd.basis.triplet, fd.basis.invariants, h);
    for (int a = 0; a < n; ++a) {
      const MultiPoly p = ex.psi_monomial(ExpVec::unit(n, a));
      if (!(p == MultiPoly::variable(n, a))) note(fail, "psi(x^" + std::to_string(a + 1) + ") = " + p.to_string("z"));
    }
    r.add("isometry", fail.empty(), fail);
  }
  {
    std::string fail;
    const PolyMatrix hess = potential_hessian(fd.basis, fd.intersection);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const MultiPoly second = derive(derive(fd.potential, mu), nu);
        if (!(second == hess[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)])) note(fail, "Hessian entry " + idx({mu, nu}) + " mismatch");
        for (int g = 0; g < n; ++g) {
          const MultiPoly third = derive(second, n - 1 - g);
          if (!(third == C(mu, nu, g))) note(fail, "d_" + std::to_string(mu + 1) + " d_" + std::to_string(nu + 1) + " d^" + std::to_string(g + 1) + " F - C = " + (third - C(mu, nu, g)).to_string());
        }
      }
    r.add("potential", fail.empty(), fail);
  }
  return r;
}

}  // namespace refrob
