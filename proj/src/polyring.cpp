#include "refrob/polyring.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "refrob/kernels.hpp"

namespace refrob {

namespace {

constexpr std::uint64_t kHighBits = 0x8080808080808080ULL;

void check_nvars(int n) {
  if (n < 0 || n > kMaxVars) {
    throw PolyError("number of variables must be in [0, " + std::to_string(kMaxVars) + "], got " + std::to_string(n));
  }
}

void check_same_ring(const MultiPoly& f, const MultiPoly& g) {
  if (f.nvars() != g.nvars()) {
    throw PolyError("polynomials live in different rings (" + std::to_string(f.nvars()) + " vs " +
                    std::to_string(g.nvars()) + " variables)");
  }
}

int degree_of_packed(std::uint64_t p) {
  int d = 0;
  for (; p != 0; p >>= 8) d += static_cast<int>(p & 0xffU);
  return d;
}

Integer binomial(int n, int k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

// Powers base^0 .. base^k, computed on demand.
class PowerCache {
 public:
  explicit PowerCache(CycScalar base) { powers_.push_back(1), powers_.push_back(std::move(base)); }
  const CycScalar& operator()(int k) {
    while (static_cast<int>(powers_.size()) <= k) powers_.push_back(powers_.back() * powers_[1]);
    return powers_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<CycScalar> powers_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ExpVec

ExpVec::ExpVec(int nvars) {
  check_nvars(nvars);
  n_ = static_cast<std::uint8_t>(nvars);
}

ExpVec::ExpVec(std::initializer_list<int> exps) : ExpVec(std::span<const int>(exps.begin(), exps.size())) {}

ExpVec::ExpVec(std::span<const int> exps) : ExpVec(static_cast<int>(exps.size())) {
  int deg = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const int e = exps[i];
    if (e < 0 || e > kMaxExponent) {
      throw PolyError("exponent " + std::to_string(e) + " outside [0, " + std::to_string(kMaxExponent) + "]");
    }
    packed_ |= static_cast<std::uint64_t>(e) << shift(static_cast<int>(i));
    deg += e;
  }
  deg_ = static_cast<std::uint16_t>(deg);
}

ExpVec ExpVec::unit(int nvars, int var) {
  ExpVec e(nvars);
  if (var < 0 || var >= nvars) throw PolyError("variable index " + std::to_string(var) + " out of range");
  e.packed_ = std::uint64_t{1} << shift(var);
  e.deg_ = 1;
  return e;
}

ExpVec ExpVec::from_packed(std::uint64_t packed, int nvars) {
  ExpVec e(nvars);
  e.packed_ = packed;
  e.deg_ = static_cast<std::uint16_t>(degree_of_packed(packed));
  return e;
}

ExpVec ExpVec::with(int i, int e) const {
  if (i < 0 || i >= n_) throw PolyError("variable index " + std::to_string(i) + " out of range");
  if (e < 0 || e > kMaxExponent) throw PolyError("exponent " + std::to_string(e) + " out of range");
  ExpVec out = *this;
  out.packed_ &= ~(std::uint64_t{0xff} << shift(i));
  out.packed_ |= static_cast<std::uint64_t>(e) << shift(i);
  out.deg_ = static_cast<std::uint16_t>(deg_ - (*this)[i] + e);
  return out;
}

std::vector<int> ExpVec::to_vector() const {
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

bool ExpVec::divides(const ExpVec& other) const {
  for (int i = 0; i < n_; ++i)
    if ((*this)[i] > other[i]) return false;
  return true;
}

ExpVec operator+(const ExpVec& a, const ExpVec& b) {
  ExpVec out = a;
  out.packed_ = a.packed_ + b.packed_;
  if ((out.packed_ & kHighBits) != 0) throw PolyError("exponent overflow: an exponent exceeds 127");
  out.deg_ = static_cast<std::uint16_t>(a.deg_ + b.deg_);
  return out;
}

ExpVec operator-(const ExpVec& a, const ExpVec& b) {
  if (!b.divides(a)) throw PolyError("exponent subtraction would go negative");
  ExpVec out = a;
  out.packed_ = a.packed_ - b.packed_;
  out.deg_ = static_cast<std::uint16_t>(a.deg_ - b.deg_);
  return out;
}

std::string ExpVec::to_string() const {
  std::string s = "(";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ',';
    s += std::to_string((*this)[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// WeightVec

WeightVec::WeightVec(std::initializer_list<int> w) : WeightVec(std::vector<int>(w)) {}

WeightVec::WeightVec(std::vector<int> w) : w_(std::move(w)) {
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] <= 0) throw PolyError("weights must be positive");
    if (i > 0 && w_[i] < w_[i - 1]) throw PolyError("weights must be non-decreasing");
  }
}

int WeightVec::dot(const ExpVec& a) const {
  if (a.size() != size()) throw PolyError("weight vector and exponent have different lengths");
  int s = 0;
  for (int i = 0; i < size(); ++i) s += w_[static_cast<std::size_t>(i)] * a[i];
  return s;
}

// ---------------------------------------------------------------------------
// PolyBuilder

void PolyBuilder::add(const ExpVec& exp, const CycScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(exp.packed(), c);
  if (!inserted) it->second += c;
}

void PolyBuilder::add_product(const ExpVec& exp, const CycScalar& a, const CycScalar& b) {
  auto it = acc_.find(exp.packed());
  if (it == acc_.end()) {
    acc_.emplace(exp.packed(), a * b);
  } else {
    fused_multiply_add(it->second, a, b);
  }
}

void PolyBuilder::add(const MultiPoly& f) {
  if (f.nvars() != n_) throw PolyError("PolyBuilder: ring mismatch");
  for (const auto& [e, c] : f.terms()) add(e, c);
}

MultiPoly PolyBuilder::build() && {
  MultiPoly out(n_);
  out.terms_.reserve(acc_.size());
  for (auto& [p, c] : acc_) {
    if (!c.is_zero()) out.terms_.emplace_back(ExpVec::from_packed(p, n_), std::move(c));
  }
  std::sort(out.terms_.begin(), out.terms_.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  acc_.clear();
  return out;
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(int nvars) : n_(nvars) { check_nvars(nvars); }

MultiPoly MultiPoly::constant(int nvars, const CycScalar& c) {
  MultiPoly f(nvars);
  if (!c.is_zero()) f.terms_.emplace_back(ExpVec(nvars), c);
  return f;
}

MultiPoly MultiPoly::variable(int nvars, int var) {
  MultiPoly f(nvars);
  f.terms_.emplace_back(ExpVec::unit(nvars, var), CycScalar(1));
  return f;
}

MultiPoly MultiPoly::monomial(const ExpVec& exp, const CycScalar& c) {
  MultiPoly f(exp.size());
  if (!c.is_zero()) f.terms_.emplace_back(exp, c);
  return f;
}

MultiPoly MultiPoly::from_terms(int nvars, std::vector<Term> terms) {
  PolyBuilder b(nvars);
  for (auto& [e, c] : terms) {
    if (e.size() != nvars) throw PolyError("term exponent has the wrong number of variables");
    b.add(e, c);
  }
  return std::move(b).build();
}

MultiPoly MultiPoly::from_sorted_terms(int nvars, std::vector<Term> terms) {
  MultiPoly f(nvars);
#ifndef NDEBUG
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].second.is_zero() || (i > 0 && !(terms[i - 1].first > terms[i].first))) {
      throw PolyError("from_sorted_terms: terms are not strictly descending and nonzero");
    }
  }
#endif
  f.terms_ = std::move(terms);
  return f;
}

bool MultiPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.total_degree() == 0); }

CycScalar MultiPoly::coeff(const ExpVec& exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp, [](const Term& t, const ExpVec& e) { return t.first > e; });
  if (it != terms_.end() && it->first == exp) return it->second;
  return {};
}

int MultiPoly::total_degree() const { return terms_.empty() ? -1 : terms_.front().first.total_degree(); }

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& g) {
  check_same_ring(*this, g);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + g.terms_.size());
  auto a = terms_.begin();
  auto b = g.terms_.begin();
  while (a != terms_.end() || b != g.terms_.end()) {
    if (b == g.terms_.end() || (a != terms_.end() && a->first > b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first > a->first) {
      merged.push_back(*b++);
    } else {
      CycScalar c = std::move(a->second);
      c += b->second;
      if (!c.is_zero()) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& g) { return *this += -g; }

MultiPoly& MultiPoly::operator*=(const MultiPoly& g) { return *this = *this * g; }

MultiPoly& MultiPoly::operator*=(const CycScalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& f, const MultiPoly& g) {
  check_same_ring(f, g);
  return kernels::multiply(f, g);
}

bool operator==(const MultiPoly& f, const MultiPoly& g) { return f.n_ == g.n_ && f.terms_ == g.terms_; }

MultiPoly MultiPoly::pow(int k) const {
  if (k < 0) throw PolyError("negative polynomial power");
  MultiPoly result = constant(n_, 1);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

std::string MultiPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string cs = c.to_string();
    const bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    bool negative = false;
    if (!compound && cs[0] == '-') {
      negative = true;
      cs.erase(0, 1);
    }
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const bool unit = cs == "1";
    if (e.total_degree() == 0) {
      os << (compound ? "(" + cs + ")" : cs);
      continue;
    }
    if (!unit) os << (compound ? "(" + cs + ")" : cs) << '*';
    bool first_var = true;
    for (int i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first_var) os << '*';
      first_var = false;
      os << var << (i + 1);
      if (e[i] > 1) os << '^' << e[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Free functions

MultiPoly poly_arith(PolyOp op, const MultiPoly& f, const MultiPoly& g) {
  switch (op) {
    case PolyOp::add:
      return f + g;
    case PolyOp::sub:
      return f - g;
    case PolyOp::mul:
      return f * g;
  }
  throw PolyError("unknown polynomial operation");
}

MultiPoly derive(const MultiPoly& f, int var) {
  if (var < 0 || var >= f.nvars()) throw PolyError("derivative variable " + std::to_string(var) + " out of range");
  std::vector<MultiPoly::Term> out;
  const ExpVec unit = ExpVec::unit(f.nvars(), var);
  for (const auto& [e, c] : f.terms()) {
    if (e[var] == 0) continue;
    out.emplace_back(e - unit, c * CycScalar(static_cast<long>(e[var])));
  }
  // subtracting the same unit from every surviving exponent keeps the order
  return MultiPoly::from_sorted_terms(f.nvars(), std::move(out));
}

MultiPoly derive(const MultiPoly& f, const ExpVec& b) {
  if (b.size() != f.nvars()) throw PolyError("derivative multi-index has the wrong length");
  std::vector<MultiPoly::Term> out;
  for (const auto& [e, c] : f.terms()) {
    if (!b.divides(e)) continue;
    Integer k = 1;
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < b[i]; ++j) k *= e[i] - j;
    out.emplace_back(e - b, c * CycScalar(Rational(k)));
  }
  return MultiPoly::from_sorted_terms(f.nvars(), std::move(out));
}

CycScalar evaluate(const MultiPoly& f, std::span<const CycScalar> point) {
  if (static_cast<int>(point.size()) != f.nvars()) throw PolyError("evaluation point has the wrong dimension");
  std::vector<PowerCache> powers;
  powers.reserve(point.size());
  for (const auto& p : point) powers.emplace_back(p);
  CycScalar sum;
  for (const auto& [e, c] : f.terms()) {
    CycScalar t = c;
    for (int i = 0; i < e.size() && !t.is_zero(); ++i)
      if (e[i] > 0) t *= powers[static_cast<std::size_t>(i)](e[i]);
    sum += t;
  }
  return sum;
}

CycScalar taylor_coeff(const MultiPoly& f, const ExpVec& b, std::span<const CycScalar> q) {
  if (static_cast<int>(q.size()) != f.nvars() || b.size() != f.nvars()) {
    throw PolyError("taylor_coeff: dimension mismatch");
  }
  std::vector<PowerCache> powers;
  powers.reserve(q.size());
  for (const auto& p : q) powers.emplace_back(p);
  CycScalar sum;
  for (const auto& [e, c] : f.terms()) {
    if (!b.divides(e)) continue;
    Integer k = 1;
    CycScalar t = c;
    for (int i = 0; i < e.size() && !t.is_zero(); ++i) {
      const int rest = e[i] - b[i];
      k *= binomial(e[i], b[i]);
      if (rest > 0) t *= powers[static_cast<std::size_t>(i)](rest);
    }
    if (!t.is_zero()) sum += t * CycScalar(Rational(k));
  }
  return sum;
}

MultiPoly shift(const MultiPoly& f, std::span<const CycScalar> p) {
  if (static_cast<int>(p.size()) != f.nvars()) throw PolyError("shift vector has the wrong dimension");
  std::vector<MultiPoly> gs;
  for (int i = 0; i < f.nvars(); ++i)
    gs.push_back(MultiPoly::variable(f.nvars(), i) + MultiPoly::constant(f.nvars(), p[static_cast<std::size_t>(i)]));
  return compose(f, gs);
}

MultiPoly weighted_part(const MultiPoly& f, const WeightVec& d, int j) {
  std::vector<MultiPoly::Term> out;
  for (const auto& t : f.terms())
    if (d.dot(t.first) == j) out.push_back(t);
  return MultiPoly::from_sorted_terms(f.nvars(), std::move(out));
}

MultiPoly truncate_weight(const MultiPoly& f, const WeightVec& d, int max_weight) {
  std::vector<MultiPoly::Term> out;
  for (const auto& t : f.terms())
    if (d.dot(t.first) <= max_weight) out.push_back(t);
  return MultiPoly::from_sorted_terms(f.nvars(), std::move(out));
}

std::optional<int> homogeneous_weight(const MultiPoly& f, const WeightVec& d) {
  if (f.is_zero()) return 0;
  const int w = d.dot(f.terms().front().first);
  for (const auto& t : f.terms())
    if (d.dot(t.first) != w) return std::nullopt;
  return w;
}

MultiPoly mul_truncated(const MultiPoly& f, const MultiPoly& g, const WeightVec& d, int max_weight) {
  check_same_ring(f, g);
  return kernels::multiply(f, g, &d, max_weight);
}

namespace {

// Evaluates f at (images[0], ..., images[n-1]) by grouping terms on the
// exponent of one variable at a time, so shared prefixes are multiplied once.
class Composer {
 public:
  Composer(std::span<const MultiPoly> images, int target_vars, const WeightVec* d, int max_weight)
      : images_(images), target_vars_(target_vars), d_(d), max_weight_(max_weight), powers_(images.size()) {}

  MultiPoly run(const MultiPoly& f) {
    std::vector<const MultiPoly::Term*> terms;
    terms.reserve(f.size());
    for (const auto& t : f.terms()) terms.push_back(&t);
    return rec(terms, 0);
  }

 private:
  MultiPoly mul(const MultiPoly& a, const MultiPoly& b) const {
    return d_ ? mul_truncated(a, b, *d_, max_weight_) : a * b;
  }

  const MultiPoly& power(std::size_t var, int k) {
    auto& cache = powers_[var];
    if (cache.empty()) cache.push_back(MultiPoly::constant(target_vars_, 1));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(mul(cache.back(), images_[var]));
    return cache[static_cast<std::size_t>(k)];
  }

  MultiPoly rec(std::vector<const MultiPoly::Term*>& terms, std::size_t var) {
    if (var == images_.size()) {
      CycScalar sum;
      for (const auto* t : terms) sum += t->second;
      return MultiPoly::constant(target_vars_, sum);
    }
    const int v = static_cast<int>(var);
    std::stable_sort(terms.begin(), terms.end(), [v](const auto* a, const auto* b) { return a->first[v] < b->first[v]; });
    PolyBuilder acc(target_vars_);
    for (std::size_t lo = 0; lo < terms.size();) {
      const int k = terms[lo]->first[v];
      std::size_t hi = lo;
      while (hi < terms.size() && terms[hi]->first[v] == k) ++hi;
      std::vector<const MultiPoly::Term*> group(terms.begin() + static_cast<std::ptrdiff_t>(lo),
                                                terms.begin() + static_cast<std::ptrdiff_t>(hi));
      MultiPoly inner = rec(group, var + 1);
      if (!inner.is_zero()) acc.add(k == 0 ? inner : mul(power(var, k), inner));
      lo = hi;
    }
    return std::move(acc).build();
  }

  std::span<const MultiPoly> images_;
  int target_vars_;
  const WeightVec* d_;
  int max_weight_;
  std::vector<std::vector<MultiPoly>> powers_;
};

}  // namespace

MultiPoly compose(const MultiPoly& f, std::span<const MultiPoly> gs) {
  if (static_cast<int>(gs.size()) != f.nvars()) throw PolyError("compose: need one image per variable");
  if (gs.empty()) return f;
  const int m = gs[0].nvars();
  for (const auto& g : gs)
    if (g.nvars() != m) throw PolyError("compose: images live in different rings");
  return Composer(gs, m, nullptr, 0).run(f);
}

MultiPoly compose_truncated(const MultiPoly& f, std::span<const MultiPoly> gs, const WeightVec& d, int max_weight) {
  if (static_cast<int>(gs.size()) != f.nvars()) throw PolyError("compose: need one image per variable");
  if (gs.empty()) return f;
  const int m = gs[0].nvars();
  for (const auto& g : gs) {
    if (g.nvars() != m) throw PolyError("compose: images live in different rings");
  }
  if (d.size() != m) throw PolyError("compose: weights do not match the target ring");
  std::vector<MultiPoly> truncated;
  for (const auto& g : gs) truncated.push_back(truncate_weight(g, d, max_weight));
  return Composer(truncated, m, &d, max_weight).run(f);
}

MultiPoly subst_linear(const MultiPoly& f, const Matrix& m) {
  if (static_cast<int>(m.rows()) != f.nvars()) throw PolyError("subst_linear: matrix row count must equal nvars");
  const int target = static_cast<int>(m.cols());
  std::vector<MultiPoly> images;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<MultiPoly::Term> terms;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) terms.emplace_back(ExpVec::unit(target, static_cast<int>(j)), m(i, j));
    images.push_back(MultiPoly::from_terms(target, std::move(terms)));
  }
  if (images.empty()) return MultiPoly::constant(target, f.coeff(ExpVec(0)));
  return compose(f, images);
}

std::vector<ExpVec> monomials_of_degree(int n, int k) {
  std::vector<ExpVec> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int rest) {
    if (i == n - 1) {
      e[static_cast<std::size_t>(i)] = rest;
      out.emplace_back(std::span<const int>(e));
      return;
    }
    for (int a = rest; a >= 0; --a) {
      e[static_cast<std::size_t>(i)] = a;
      rec(i + 1, rest - a);
    }
  };
  if (n == 0) {
    if (k == 0) out.emplace_back(0);
    return out;
  }
  rec(0, k);
  return out;
}

MultiPoly linear_form_power(std::span<const CycScalar> coeffs, int k) {
  const int n = static_cast<int>(coeffs.size());
  if (k < 0) throw PolyError("negative power of a linear form");
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (!coeffs[static_cast<std::size_t>(i)].is_zero()) support.push_back(i);
  if (support.empty()) return k == 0 ? MultiPoly::constant(n, 1) : MultiPoly(n);
  Integer kfact;
  mpz_fac_ui(kfact.get_mpz_t(), static_cast<unsigned long>(k));
  std::vector<PowerCache> powers;
  for (int i : support) powers.emplace_back(coeffs[static_cast<std::size_t>(i)]);
  std::vector<MultiPoly::Term> terms;
  for (const auto& a : monomials_of_degree(static_cast<int>(support.size()), k)) {
    ExpVec e(n);
    CycScalar c(Rational(kfact) / factorial(a));
    for (std::size_t s = 0; s < support.size(); ++s) {
      const int ai = a[static_cast<int>(s)];
      if (ai == 0) continue;
      e = e.with(support[s], ai);
      c *= powers[s](ai);
    }
    terms.emplace_back(e, std::move(c));
  }
  return MultiPoly::from_terms(n, std::move(terms));
}

std::vector<ExpVec> monomials_of_weight(int n, const WeightVec& d, int j) {
  if (d.size() != n) throw PolyError("monomials_of_weight: weight vector length must equal n");
  std::vector<ExpVec> out;
  if (j < 0) return out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  // Outermost loop runs over the last variable, innermost over the first.
  std::function<void(int, int)> rec = [&](int i, int rest) {
    if (i == 0) {
      if (rest % d[0] == 0 && rest / d[0] <= kMaxExponent) {
        e[0] = rest / d[0];
        out.emplace_back(std::span<const int>(e));
      }
      return;
    }
    for (int a = 0; a * d[i] <= rest; ++a) {
      e[static_cast<std::size_t>(i)] = a;
      rec(i - 1, rest - a * d[i]);
    }
    e[static_cast<std::size_t>(i)] = 0;
  };
  if (n == 0) {
    if (j == 0) out.emplace_back(0);
    return out;
  }
  rec(n - 1, j);
  return out;
}

Rational factorial(const ExpVec& b) {
  Integer out = 1;
  for (int i = 0; i < b.size(); ++i) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(b[i]));
    out *= f;
  }
  return Rational(out);
}

}  // namespace refrob
