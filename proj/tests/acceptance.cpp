// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "refrob/frobenius.hpp"

using namespace refrob;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    passed = false;
    notes.push_back(why);
  }
};

MultiPoly mono(int n, std::vector<int> e, const CycScalar& c = 1) {
  return MultiPoly::monomial(ExpVec(std::span<const int>(e)), c);
}

// The list of criterion 2.
std::vector<GroupSpec> suite() {
  std::vector<GroupSpec> out;
  for (int n = 2; n <= 6; ++n) out.push_back({Family::A, n, 0});
  for (int n = 2; n <= 6; ++n) out.push_back({Family::B, n, 0});
  out.push_back({Family::D, 5, 0});
  for (int m = 3; m <= 12; ++m) out.push_back({Family::I2, 2, m});
  out.push_back({Family::H3, 3, 0});
  out.push_back({Family::F4, 4, 0});
  return out;
}

struct GroupRun {
  GroupSpec spec;
  std::optional<GoodBasis> basis;
  std::optional<FrobeniusData> frobenius;
  std::string error;
  double good_seconds = 0;
  double frobenius_seconds = 0;
};

std::string failed_names(const Report& r) {
  std::string s;
  for (const auto& c : r.checks())
    if (!c.passed) s += (s.empty() ? "" : ", ") + c.name + " [" + c.detail.substr(0, 200) + "]";
  return s;
}

void print(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "\n";
  for (const auto& n : o.notes) std::cout << "      " << n << "\n";
  std::cout.flush();
}

// 1. dihedral closed forms against a hand-derived fixture
Outcome dihedral(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  for (int m : {3, 4, 5, 6, 8, 12}) {
    const GroupRun& r = runs.at(to_string(GroupSpec{Family::I2, 2, m}));
    const std::string tag = "I2(" + std::to_string(m) + ")";
    if (!r.frobenius) {
      o.fail(tag + ": " + r.error);
      continue;
    }
    const FrobeniusData& fd = *r.frobenius;
    const CycScalar inv_m(Rational(1, m));
    const MultiPoly x1 = mono(2, {1, 0}), x2 = mono(2, {0, 1});
    std::vector<std::pair<std::string, bool>> cmp{
        {"x1 = uv", fd.basis.invariants[0] == mono(2, {1, 1})},
        {"x2 = (u^m + v^m)/m", fd.basis.invariants[1] == mono(2, {m, 0}, inv_m) + mono(2, {0, m}, inv_m)},
        {"I*(dx1,dx1) = 2 x1", fd.intersection[0][0] == x1 * CycScalar(2)},
        {"I*(dx1,dx2) = m x2", fd.intersection[0][1] == x2 * CycScalar(m)},
        {"I*(dx2,dx2) = 2 x1^(m-1)", fd.intersection[1][1] == mono(2, {m - 1, 0}, 2)},
        {"g antidiagonal unit", fd.metric.upper == Matrix::from_rows({{0, 1}, {1, 0}})},
        {"C_11^2 = x1^(m-2)", fd.structure(0, 0, 1) == mono(2, {m - 2, 0})},
    };
    for (const auto& [what, ok] : cmp)
      if (!ok) o.fail(tag + ": " + what + " does not hold");
    const double t = r.good_seconds + r.frobenius_seconds;
    if (t >= 1.0) o.fail(tag + ": took " + fmt(t) + " s");
    o.notes.push_back(tag + " exact match in " + fmt(t) + " s");
  }
  return o;
}

// 2. goodness clauses up to weight 2 d_n
Outcome goodness(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  std::string timing;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    if (!r.basis) {
      o.fail(to_string(spec) + ": " + r.error);
      continue;
    }
    const auto t0 = Clock::now();
    const Report rep = check_good(*r.basis);
    const double t = r.good_seconds + seconds_since(t0);
    if (!rep.passed()) o.fail(to_string(spec) + ": " + failed_names(rep));
    const double budget = spec.family == Family::F4 ? 600 : 60;
    if (spec.rank <= 4 && t > budget) o.fail(to_string(spec) + ": " + fmt(t) + " s over budget");
    timing += to_string(spec) + " " + fmt(t) + "s  ";
  }
  o.notes.push_back(timing);
  return o;
}

// 3. expansion identity for every pair
Outcome expansion(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  int groups = 0;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    if (!r.frobenius) {
      o.fail(to_string(spec) + ": " + r.error);
      continue;
    }
    const Report rep = expansion_identity_check(r.frobenius->basis, r.frobenius->intersection);
    if (!rep.passed()) o.fail(to_string(spec) + ": " + failed_names(rep));
    ++groups;
  }
  o.notes.push_back(std::to_string(groups) + " groups, all pairs");
  return o;
}

// 4. Frobenius axioms
Outcome axioms(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  std::string done;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    const bool mandatory = spec.rank <= 4;
    if (!r.frobenius) {
      if (mandatory) {
        o.fail(to_string(spec) + ": " + r.error);
      } else {
        o.notes.push_back(to_string(spec) + " (best effort) not built: " + r.error);
      }
      continue;
    }
    const auto t0 = Clock::now();
    const Report rep = verify_axioms(*r.frobenius);
    if (!rep.passed()) o.fail(to_string(spec) + ": " + failed_names(rep));
    done += to_string(spec) + " " + fmt(r.frobenius_seconds + seconds_since(t0)) + "s  ";
  }
  o.notes.push_back("checked: " + done);
  o.notes.push_back("Euler weights per term of C_{ab}^g: d . b = d_n + d_g - d_a - d_b");
  return o;
}

// 5. triplet independence
Outcome independence(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    if (!r.basis) {
      o.fail(to_string(spec) + ": " + r.error);
      continue;
    }
    const AdmissibleTriplet& t = r.basis->triplet;
    const int n = spec.rank;
    const int h = t.group->coxeter_number();
    int r_pow = h - 1;
    for (int k = 2; k < h; ++k)
      if (std::gcd(k, h) == 1) {
        r_pow = k;
        break;
      }
    std::vector<std::pair<std::string, TripletAction>> actions{
        {"conjugate", Conjugate{{n - 1, 0, n / 2}}},
        {"scale", Scale{CycScalar(Rational(-5, 3))}},
        {"power " + std::to_string(r_pow), Power{r_pow}},
    };
    if (spec.family == Family::H3) actions.emplace_back("power 3", Power{3});
    int same = 0;
    for (const auto& [name, action] : actions) {
      try {
        const AdmissibleTriplet other = transform_triplet(t, action);
        const Report adm = check_admissible(*t.group, other.g, other.zeta, other.q, t.group->initial_invariants());
        if (!adm.passed()) {
          o.fail(to_string(spec) + " " + name + ": not admissible: " + failed_names(adm));
          continue;
        }
        if (same_good_span(*r.basis, good_basic_invariants(other))) {
          ++same;
        } else {
          o.fail(to_string(spec) + " " + name + ": spans differ");
        }
      } catch (const std::exception& e) {
        o.fail(to_string(spec) + " " + name + ": " + e.what());
      }
    }
    if (same < 3) o.fail(to_string(spec) + ": only " + std::to_string(same) + " equivalent triplets");
  }
  o.notes.push_back("conjugation, rescaling of q and a coprime power per group; H3 also with r = 3");
  return o;
}

// 6. isometry between the dual Gram matrix of z and the flat metric of x
Outcome isometry(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    if (!r.frobenius) {
      o.fail(to_string(spec) + ": " + r.error);
      continue;
    }
    if (!(r.frobenius->basis.triplet.frame.dual_gram == r.frobenius->metric.upper)) {
      o.fail(to_string(spec) + ": dual Gram and flat metric differ");
    }
  }
  return o;
}

// 7. each verifier rejects corrupted input
Outcome negative_controls(std::map<std::string, GroupRun>& runs) {
  Outcome o;
  int goodness_rejections = 0, associativity_rejections = 0;
  for (const auto& spec : suite()) {
    GroupRun& r = runs.at(to_string(spec));
    if (!r.frobenius) continue;
    const int n = spec.rank;
    const auto& d = r.frobenius->degrees;

    // x^n + a product of lower invariants of the same degree
    std::optional<ExpVec> extra;
    for (const auto& a : monomials_of_weight(n, d, d.back()))
      if (a.total_degree() >= 2) extra = a;
    if (extra) {
      GoodBasis bad = r.frobenius->basis;
      MultiPoly p = MultiPoly::constant(n, 1);
      for (int i = 0; i < n; ++i) p *= bad.invariants[static_cast<std::size_t>(i)].pow((*extra)[i]);
      bad.invariants[static_cast<std::size_t>(n - 1)] += p;
      const Report rep = check_good(bad);
      if (rep.find("goodness")->passed) {
        o.fail(to_string(spec) + ": perturbed invariant passed goodness");
      } else {
        ++goodness_rejections;
      }
    }

    FrobeniusData bad = *r.frobenius;
    if (n == 2) {
      bad.structure(1, 0, 0) += MultiPoly::constant(n, 1);
    } else {
      bad.structure(0, 0, 1) += MultiPoly::variable(n, 0);
    }
    if (verify_axioms(bad).find("associativity")->passed) {
      o.fail(to_string(spec) + ": perturbed C passed associativity");
    } else {
      ++associativity_rejections;
    }
  }
  if (goodness_rejections == 0 || associativity_rejections == 0) o.fail("no corrupted input was exercised");
  o.notes.push_back(std::to_string(goodness_rejections) + " perturbed bases rejected by goodness, " +
                    std::to_string(associativity_rejections) + " perturbed C rejected by associativity");
  return o;
}

}  // namespace

int main() {
  std::map<std::string, GroupRun> runs;
  const auto start = Clock::now();
  for (const auto& spec : suite()) {
    GroupRun r;
    r.spec = spec;
    try {
      auto t0 = Clock::now();
      r.basis = good_basic_invariants(standard_triplet(build_group(spec)));
      r.good_seconds = seconds_since(t0);
      t0 = Clock::now();
      r.frobenius = build_frobenius(*r.basis);
      r.frobenius_seconds = seconds_since(t0);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    runs.emplace(to_string(spec), std::move(r));
  }

  const std::vector<std::pair<std::string, std::function<Outcome(std::map<std::string, GroupRun>&)>>> criteria{
      {"I2(m) closed forms, m in {3,4,5,6,8,12}", dihedral},
      {"goodness, delta and congruence up to weight 2 d_n for every group", goodness},
      {"intersection form expansion identity, every pair, every group", expansion},
      {"Frobenius axioms (mandatory rank <= 4, ranks 5-6 best effort)", axioms},
      {"triplet independence of good-invariant spans", independence},
      {"isometry of dual Gram and flat metric", isometry},
      {"negative controls", negative_controls},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second(runs);
    print(static_cast<int>(i + 1), criteria[i].first, o);
    all = all && o.passed;
  }
  std::cout << (all ? "ALL PASS" : "SOME FAILED") << " in " << fmt(seconds_since(start)) << " s\n";
  return all ? 0 : 1;
}
