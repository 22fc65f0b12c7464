#include "refrob/scalar.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#ifndef REFROB_DEFAULT_CONDUCTOR_CAP
#define REFROB_DEFAULT_CONDUCTOR_CAP 120
#endif

namespace refrob {

namespace detail {

struct CyclotomicField {
  int n = 1;
  int phi = 1;
  std::vector<long> poly;  // monic, length phi + 1, constant term first

  // Reduces coeffs (constant term first, any length) modulo Phi_n in place and
  // truncates to length phi.
  void reduce(std::vector<Integer>& coeffs) const {
    for (std::size_t k = coeffs.size(); k-- > static_cast<std::size_t>(phi);) {
      if (sgn(coeffs[k]) == 0) continue;
      const std::size_t base = k - static_cast<std::size_t>(phi);
      for (int j = 0; j < phi; ++j) {
        const long c = poly[static_cast<std::size_t>(j)];
        if (c > 0) {
          mpz_submul_ui(coeffs[base + j].get_mpz_t(), coeffs[k].get_mpz_t(), static_cast<unsigned long>(c));
        } else if (c < 0) {
          mpz_addmul_ui(coeffs[base + j].get_mpz_t(), coeffs[k].get_mpz_t(), static_cast<unsigned long>(-c));
        }
      }
      coeffs[k] = 0;
    }
    coeffs.resize(static_cast<std::size_t>(phi));
  }
};

}  // namespace detail

namespace {

using detail::CyclotomicField;

std::vector<long> poly_divide_exact(std::vector<long> num, const std::vector<long>& den) {
  // den is monic
  const std::size_t dn = den.size() - 1;
  std::vector<long> quot(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const long c = num[k];
    quot[k - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  return quot;
}

std::vector<long> compute_cyclotomic(int n) {
  std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = poly_divide_exact(std::move(p), cyclotomic_polynomial(d));
  }
  return p;
}

const CyclotomicField* field(int n) {
  if (n < 1) throw ScalarError("conductor must be positive, got " + std::to_string(n));
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CyclotomicField>> fields;
  {
    std::lock_guard lock(mutex);
    auto it = fields.find(n);
    if (it != fields.end()) return it->second.get();
  }
  auto f = std::make_unique<CyclotomicField>();
  f->n = n;
  f->phi = euler_phi(n);
  f->poly = cyclotomic_polynomial(n);
  std::lock_guard lock(mutex);
  return fields.emplace(n, std::move(f)).first->second.get();
}

const CyclotomicField* rationals() {
  static const CyclotomicField* q = field(1);
  return q;
}

int checked_lcm(int a, int b, int cap) {
  const long l = std::lcm(static_cast<long>(a), static_cast<long>(b));
  if (l > cap) {
    throw ConductorOverflow("common conductor lcm(" + std::to_string(a) + ", " + std::to_string(b) + ") = " +
                            std::to_string(l) + " exceeds the conductor cap " + std::to_string(cap));
  }
  return static_cast<int>(l);
}

// Solves A x = b over Q (A square or tall). Returns nullopt when inconsistent
// or when the solution is not unique.
std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) return std::nullopt;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivots.push_back(c);
    ++r;
  }
  if (r < cols) return std::nullopt;
  for (std::size_t i = r; i < rows; ++i) {
    if (sgn(b[i]) != 0) return std::nullopt;
  }
  b.resize(cols);
  return b;
}

thread_local std::vector<Integer> scratch;

}  // namespace

namespace {

int initial_conductor_cap() {
  if (const char* env = std::getenv("REFROB_CONDUCTOR_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1'000'000) return static_cast<int>(v);
  }
  return REFROB_DEFAULT_CONDUCTOR_CAP;
}

std::atomic<int>& cap_slot() {
  static std::atomic<int> cap{initial_conductor_cap()};
  return cap;
}

}  // namespace

int conductor_cap() { return cap_slot().load(std::memory_order_relaxed); }

void set_conductor_cap(int cap) {
  if (cap < 1) throw ScalarError("conductor cap must be positive");
  cap_slot().store(cap, std::memory_order_relaxed);
}

int euler_phi(int n) {
  int result = n;
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

const std::vector<long>& cyclotomic_polynomial(int n) {
  if (n < 1) throw ScalarError("cyclotomic polynomial index must be positive");
  static std::recursive_mutex mutex;
  static std::map<int, std::vector<long>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto poly = compute_cyclotomic(n);
  return cache.emplace(n, std::move(poly)).first->second;
}

// ---------------------------------------------------------------------------

CycScalar::CycScalar() : field_(rationals()), num_(1), den_(1) {}

CycScalar::CycScalar(long value) : field_(rationals()), num_{Integer(value)}, den_(1) {}

CycScalar::CycScalar(const Rational& value)
    : field_(rationals()), num_{value.get_num()}, den_(value.get_den()) {
  normalize();
}

CycScalar::CycScalar(const detail::CyclotomicField* f, std::vector<Integer> num, Integer den)
    : field_(f), num_(std::move(num)), den_(std::move(den)) {}

CycScalar CycScalar::from_coords(int conductor, std::span<const Rational> coords) {
  const CyclotomicField* f = field(conductor);
  Integer den = 1;
  for (const auto& c : coords) den = lcm(den, Integer(c.get_den()));
  std::vector<Integer> num(std::max<std::size_t>(coords.size(), static_cast<std::size_t>(f->phi)));
  for (std::size_t i = 0; i < coords.size(); ++i) num[i] = coords[i].get_num() * (den / coords[i].get_den());
  if (num.size() > static_cast<std::size_t>(f->phi)) {
    // exponents beyond N wrap around before the polynomial reduction
    std::vector<Integer> wrapped(static_cast<std::size_t>(std::max(f->n, f->phi)));
    for (std::size_t i = 0; i < num.size(); ++i) wrapped[i % static_cast<std::size_t>(f->n)] += num[i];
    num = std::move(wrapped);
    f->reduce(num);
  }
  CycScalar out(f, std::move(num), std::move(den));
  out.normalize();
  return out;
}

int CycScalar::conductor() const { return field_->n; }
int CycScalar::degree() const { return field_->phi; }

std::vector<Rational> CycScalar::coords() const {
  std::vector<Rational> out;
  out.reserve(num_.size());
  for (const auto& c : num_) {
    Rational r(c, den_);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

Rational CycScalar::coord(int i) const {
  if (i < 0 || i >= degree()) return 0;
  Rational r(num_[static_cast<std::size_t>(i)], den_);
  r.canonicalize();
  return r;
}

bool CycScalar::is_zero() const {
  for (const auto& c : num_)
    if (sgn(c) != 0) return false;
  return true;
}

bool CycScalar::is_one() const {
  if (num_[0] != den_) return false;
  for (std::size_t i = 1; i < num_.size(); ++i)
    if (sgn(num_[i]) != 0) return false;
  return true;
}

Rational CycScalar::to_rational() const {
  for (std::size_t i = 1; i < num_.size(); ++i) {
    if (sgn(num_[i]) != 0) throw ScalarError("value " + to_string() + " is not rational");
  }
  Rational r(num_[0], den_);
  r.canonicalize();
  return r;
}

void CycScalar::normalize() {
  Integer g = den_;
  for (const auto& c : num_) {
    if (g == 1) break;
    if (sgn(c) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (is_zero()) {
    field_ = rationals();
    num_.assign(1, Integer(0));
    den_ = 1;
    return;
  }
  if (g != 1) {
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
  if (sgn(den_) < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  demote_if_rational();
}

void CycScalar::demote_if_rational() {
  if (field_->phi == 1) {
    if (field_->n != 1) {
      // Q(zeta_2) = Q: zeta_2 = -1 and the power basis is just {1}.
      field_ = rationals();
    }
    return;
  }
  for (std::size_t i = 1; i < num_.size(); ++i)
    if (sgn(num_[i]) != 0) return;
  num_.resize(1);
  field_ = rationals();
}

CycScalar CycScalar::operator-() const {
  CycScalar out = *this;
  for (auto& c : out.num_) c = -c;
  return out;
}

CycScalar& CycScalar::operator+=(const CycScalar& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (field_ != other.field_) {
    if (other.field_->n == 1) {
      // add a rational to coordinate 0
      CycScalar lifted(field_, std::vector<Integer>(num_.size()), other.den_);
      lifted.num_[0] = other.num_[0];
      return *this += lifted;
    }
    if (field_->n == 1) {
      CycScalar lifted(other.field_, std::vector<Integer>(other.num_.size()), den_);
      lifted.num_[0] = num_[0];
      *this = std::move(lifted);
      return *this += other;
    }
    const int n = checked_lcm(conductor(), other.conductor(), conductor_cap());
    CycScalar a = lift_conductor(*this, n);
    a += lift_conductor(other, n);
    return *this = std::move(a);
  }
  if (den_ == other.den_) {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += other.num_[i];
  } else {
    Integer l;
    mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), other.den_.get_mpz_t());
    Integer fa = l / den_;
    Integer fb = l / other.den_;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      num_[i] *= fa;
      mpz_addmul(num_[i].get_mpz_t(), other.num_[i].get_mpz_t(), fb.get_mpz_t());
    }
    den_ = std::move(l);
  }
  normalize();
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& other) { return *this += -other; }

CycScalar operator*(const CycScalar& a, const CycScalar& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.field_->n == 1 || b.field_->n == 1) {
    const CycScalar& r = a.field_->n == 1 ? a : b;
    const CycScalar& x = a.field_->n == 1 ? b : a;
    CycScalar out = x;
    for (auto& c : out.num_) c *= r.num_[0];
    out.den_ *= r.den_;
    out.normalize();
    return out;
  }
  if (a.field_ != b.field_) {
    const int n = checked_lcm(a.conductor(), b.conductor(), conductor_cap());
    return lift_conductor(a, n) * lift_conductor(b, n);
  }
  const CyclotomicField* f = a.field_;
  const std::size_t phi = static_cast<std::size_t>(f->phi);
  std::vector<Integer> prod(2 * phi - 1);
  for (std::size_t i = 0; i < phi; ++i) {
    if (sgn(a.num_[i]) == 0) continue;
    for (std::size_t j = 0; j < phi; ++j) {
      if (sgn(b.num_[j]) == 0) continue;
      mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
    }
  }
  f->reduce(prod);
  CycScalar out(f, std::move(prod), a.den_ * b.den_);
  out.normalize();
  return out;
}

void fused_multiply_add(CycScalar& acc, const CycScalar& a, const CycScalar& b) {
  if (a.is_zero() || b.is_zero()) return;
  const CyclotomicField* f = a.field_;
  if (f != b.field_ || f != acc.field_ || f->n == 1 || !(acc.den_ == a.den_ * b.den_)) {
    acc += a * b;
    return;
  }
  // Same field and the product denominator already matches the accumulator's:
  // add the raw product numerators and renormalize once.
  const std::size_t phi = static_cast<std::size_t>(f->phi);
  scratch.resize(2 * phi - 1);
  for (auto& s : scratch) s = 0;
  for (std::size_t i = 0; i < phi; ++i) {
    if (sgn(a.num_[i]) == 0) continue;
    for (std::size_t j = 0; j < phi; ++j) {
      if (sgn(b.num_[j]) == 0) continue;
      mpz_addmul(scratch[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
    }
  }
  f->reduce(scratch);
  for (std::size_t i = 0; i < phi; ++i) acc.num_[i] += scratch[i];
  acc.normalize();
}

CycScalar& CycScalar::operator*=(const CycScalar& other) { return *this = *this * other; }

CycScalar CycScalar::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (field_->n == 1) {
    CycScalar out(field_, {den_}, num_[0]);
    if (sgn(out.den_) < 0) {
      out.den_ = -out.den_;
      out.num_[0] = -out.num_[0];
    }
    return out;
  }
  // Solve (num(x) * c(x)) mod Phi = 1 for the coordinate vector c.
  const std::size_t phi = static_cast<std::size_t>(field_->phi);
  std::vector<std::vector<Rational>> m(phi, std::vector<Rational>(phi));
  std::vector<Integer> col = num_;
  for (std::size_t j = 0; j < phi; ++j) {
    for (std::size_t i = 0; i < phi; ++i) m[i][j] = col[i];
    // col <- col * x mod Phi
    col.insert(col.begin(), Integer(0));
    field_->reduce(col);
  }
  std::vector<Rational> rhs(phi);
  rhs[0] = 1;
  auto sol = solve_rational(std::move(m), std::move(rhs));
  if (!sol) throw ScalarError("cyclotomic inverse failed: singular multiplication matrix");
  for (auto& c : *sol) c *= den_;
  return from_coords(conductor(), *sol);
}

CycScalar operator/(const CycScalar& a, const CycScalar& b) { return a * b.inverse(); }

CycScalar& CycScalar::operator/=(const CycScalar& other) { return *this = *this / other; }

CycScalar CycScalar::conj() const {
  if (field_->n <= 2) return *this;
  const std::size_t n = static_cast<std::size_t>(field_->n);
  std::vector<Integer> arr(n);
  for (std::size_t i = 0; i < num_.size(); ++i) arr[(n - i) % n] += num_[i];
  field_->reduce(arr);
  CycScalar out(field_, std::move(arr), den_);
  out.normalize();
  return out;
}

bool operator==(const CycScalar& a, const CycScalar& b) {
  if (a.field_ == b.field_) return a.den_ == b.den_ && a.num_ == b.num_;
  const long n = std::lcm(static_cast<long>(a.conductor()), static_cast<long>(b.conductor()));
  CycScalar la = lift_conductor(a, static_cast<int>(n));
  CycScalar lb = lift_conductor(b, static_cast<int>(n));
  return la.den_ == lb.den_ && la.num_ == lb.num_;
}

std::size_t CycScalar::hash() const {
  auto mix = [](std::size_t h, const Integer& z) {
    const std::size_t v = static_cast<std::size_t>(mpz_get_ui(z.get_mpz_t())) ^
                          (static_cast<std::size_t>(mpz_size(z.get_mpz_t())) << 1) ^
                          static_cast<std::size_t>(sgn(z) + 1);
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  };
  bool rational = true;
  for (std::size_t i = 1; i < num_.size(); ++i)
    if (sgn(num_[i]) != 0) rational = false;
  std::size_t h = mix(rational ? 1 : static_cast<std::size_t>(field_->n), den_);
  if (rational) return mix(h, num_[0]);
  for (const auto& c : num_) h = mix(h, c);
  return h;
}

std::string CycScalar::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < num_.size(); ++i) {
    if (sgn(num_[i]) == 0) continue;
    Rational c(num_[i], den_);
    c.canonicalize();
    const bool negative = sgn(c) < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << '*';
    os << "E(" << field_->n << ')';
    if (i > 1) os << '^' << i;
  }
  if (first) os << '0';
  return os.str();
}

// ---------------------------------------------------------------------------

CycScalar arith(ArithOp op, const CycScalar& a, const CycScalar& b, int cap) {
  if (a.conductor() != 1 && b.conductor() != 1) checked_lcm(a.conductor(), b.conductor(), cap);
  if (a.conductor() > cap || b.conductor() > cap) {
    throw ConductorOverflow("operand conductor exceeds the conductor cap " + std::to_string(cap));
  }
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
    case ArithOp::div:
      return a / b;
  }
  throw ScalarError("unknown arithmetic operation");
}

CycScalar arith(ArithOp op, const CycScalar& a, const CycScalar& b) { return arith(op, a, b, conductor_cap()); }

CycScalar pow(const CycScalar& a, long e) {
  CycScalar base = e < 0 ? a.inverse() : a;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  CycScalar out = 1;
  while (k > 0) {
    if (k & 1UL) out *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return out;
}

CycScalar zeta(int n, long k) {
  if (n < 1) throw ScalarError("zeta requires a positive order");
  const long e = ((k % n) + n) % n;
  std::vector<Rational> coords(static_cast<std::size_t>(e) + 1);
  coords[static_cast<std::size_t>(e)] = 1;
  return CycScalar::from_coords(n, coords);
}

CycScalar cos_pi_over(int m) {
  if (m < 1) throw ScalarError("cos(pi/m) requires m >= 1");
  // cos(pi/m) = (zeta_{2m} + zeta_{2m}^{-1}) / 2
  return (zeta(2 * m, 1) + zeta(2 * m, -1)) * CycScalar(Rational(1, 2));
}

CycScalar lift_conductor(const CycScalar& a, int target) {
  if (target < 1 || target % a.conductor() != 0) {
    throw ScalarError("cannot lift conductor " + std::to_string(a.conductor()) + " to " + std::to_string(target) +
                      ": not a multiple");
  }
  if (target == a.conductor()) return a;
  const CyclotomicField* f = field(target);
  const std::size_t step = static_cast<std::size_t>(target / a.conductor());
  std::vector<Integer> arr(static_cast<std::size_t>(std::max(f->n, f->phi)));
  for (std::size_t i = 0; i < a.num_.size(); ++i) arr[(i * step) % static_cast<std::size_t>(f->n)] += a.num_[i];
  f->reduce(arr);
  return CycScalar(f, std::move(arr), a.den_);
}

CycScalar reduce_conductor(const CycScalar& a, int target) {
  if (target < 1 || a.conductor() % target != 0) {
    if (target >= 1 && a.is_zero()) return a;
    // A rational value stored at conductor 1 lies in every field.
    if (target >= 1 && a.conductor() == 1) return lift_conductor(a, target);
    throw ScalarError("cannot reduce conductor " + std::to_string(a.conductor()) + " to " + std::to_string(target) +
                      ": not a divisor");
  }
  if (target == a.conductor()) return a;
  const CyclotomicField* small = field(target);
  const std::size_t phi_big = static_cast<std::size_t>(a.degree());
  const std::size_t phi_small = static_cast<std::size_t>(small->phi);
  std::vector<std::vector<Rational>> m(phi_big, std::vector<Rational>(phi_small));
  for (std::size_t j = 0; j < phi_small; ++j) {
    const CycScalar basis = lift_conductor(zeta(target, static_cast<long>(j)), a.conductor());
    for (std::size_t i = 0; i < phi_big; ++i) m[i][j] = basis.coord(static_cast<int>(i));
  }
  auto sol = solve_rational(std::move(m), a.coords());
  if (!sol) {
    throw ScalarError("value " + a.to_string() + " does not lie in Q(zeta_" + std::to_string(target) + ")");
  }
  std::vector<Integer> num(phi_small);
  Integer den = 1;
  for (const auto& c : *sol) den = lcm(den, Integer(c.get_den()));
  for (std::size_t i = 0; i < phi_small; ++i) num[i] = (*sol)[i].get_num() * (den / (*sol)[i].get_den());
  return CycScalar(small, std::move(num), std::move(den));
}

std::complex<double> approx(const CycScalar& a) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  std::complex<long double> sum = 0;
  const auto n = static_cast<long double>(a.conductor());
  for (int i = 0; i < a.degree(); ++i) {
    const long double c = a.coord(i).get_d();
    const long double angle = two_pi * static_cast<long double>(i) / n;
    sum += std::complex<long double>(c * std::cos(angle), c * std::sin(angle));
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace refrob
