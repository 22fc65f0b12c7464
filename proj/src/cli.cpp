#include "refrob/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "refrob/frobenius.hpp"
#include "refrob/goodbasis.hpp"
#include "refrob/groups.hpp"
#include "refrob/json_io.hpp"

namespace refrob::cli {

namespace {

using json::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string group;
  int rank = 0;
  int m = 0;
  std::string format = "table";
  std::string out_path;
  std::vector<std::string> checks{"all"};
  int conductor_cap = 0;
  std::size_t element_cap = kDefaultElementCap;
  std::uint64_t seed = 0;
  int power = 1;
  std::vector<int> conjugate;  // 1-based generator word
};

const std::vector<std::string> kSelectors{"admissible", "good", "expansion", "frobenius", "equivalence"};

GroupSpec resolve_group(const RunConfig& cfg) {
  if (cfg.group.empty()) throw UsageError("--group is required");
  static const std::regex pattern(R"(^([A-Za-z]+)(\d*)(?:\((\d+)\))?$)");
  std::smatch mt;
  if (!std::regex_match(cfg.group, mt, pattern)) throw UsageError("cannot parse group name '" + cfg.group + "'");
  std::string letters = mt[1].str();
  std::transform(letters.begin(), letters.end(), letters.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const std::string digits = mt[2].str();
  const std::string label = mt[3].str();

  GroupSpec spec;
  if (letters == "I") {
    if (!digits.empty() && digits != "2") throw UsageError("dihedral groups are written I2, got '" + cfg.group + "'");
    spec.family = Family::I2;
    spec.rank = 2;
    spec.m = label.empty() ? cfg.m : std::stoi(label);
    if (!label.empty() && cfg.m != 0 && cfg.m != spec.m) throw UsageError("--m disagrees with the group name");
    if (spec.m == 0) throw UsageError("I2 needs an edge label, e.g. --m 5");
  } else if (letters == "H" || letters == "F" || letters == "E") {
    std::string digits_or_rank = digits.empty() && cfg.rank > 0 ? std::to_string(cfg.rank) : digits;
    spec.family = parse_family(letters + digits_or_rank);
    spec.rank = spec.family == Family::H3 ? 3 : 4;
  } else {
    if (!label.empty()) throw UsageError("only I2 takes an edge label");
    spec.family = parse_family(letters);
    const int from_name = digits.empty() ? 0 : std::stoi(digits);
    if (from_name != 0 && cfg.rank != 0 && from_name != cfg.rank) throw UsageError("--rank disagrees with the group name");
    spec.rank = from_name != 0 ? from_name : cfg.rank;
    if (spec.rank == 0) throw UsageError(letters + " needs a rank, e.g. --rank 3");
  }
  validate(spec);
  return spec;
}

std::vector<std::string> selected(const RunConfig& cfg) {
  std::vector<std::string> out;
  const bool all = std::find(cfg.checks.begin(), cfg.checks.end(), "all") != cfg.checks.end();
  for (const auto& s : kSelectors)
    if (all || std::find(cfg.checks.begin(), cfg.checks.end(), s) != cfg.checks.end()) out.push_back(s);
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string matrix_rows(const Matrix& m, const std::string& indent) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += indent + "[";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + m(i, j).to_string();
    s += "]\n";
  }
  return s;
}

AdmissibleTriplet load_triplet(const GroupPtr& group, const RunConfig& cfg) {
  AdmissibleTriplet t = standard_triplet(group);
  if (!cfg.conjugate.empty()) {
    Conjugate c;
    for (int i : cfg.conjugate) {
      if (i < 1 || i > group->rank()) throw UsageError("--conjugate indices run from 1 to the rank");
      c.word.push_back(i - 1);
    }
    t = transform_triplet(t, c);
  }
  if (cfg.power != 1) t = transform_triplet(t, Power{cfg.power});
  return t;
}

// Seeded triplets built from the standard one by each kind of transformation.
std::vector<std::pair<std::string, TripletAction>> sample_actions(const ReflectionGroup& group, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = group.rank();
  const int h = group.coxeter_number();
  std::vector<std::pair<std::string, TripletAction>> out;

  std::uniform_int_distribution<int> len(1, n + 1), gen(0, n - 1);
  Conjugate c;
  for (int k = len(rng); k > 0; --k) c.word.push_back(gen(rng));
  out.emplace_back("conjugate", c);

  std::uniform_int_distribution<int> small(1, 9);
  Rational s(small(rng) * (rng() % 2 ? -1 : 1), small(rng));
  s.canonicalize();
  out.emplace_back("scale", Scale{CycScalar(s)});

  std::vector<int> coprime;
  for (int r = 2; r < h; ++r)
    if (std::gcd(r, h) == 1) coprime.push_back(r);
  if (!coprime.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, coprime.size() - 1);
    out.emplace_back("power", Power{coprime[pick(rng)]});
  }
  return out;
}

class Runner {
 public:
  Runner(RunConfig cfg, std::ostream& err) : cfg_(std::move(cfg)), err_(err) {}

  // Each returns the exit code and writes the document into body_.
  int list_groups();
  int degrees();
  int triplet();
  int good_invariants();
  int frobenius(bool force_json);
  int verify();

  const std::string& body() const { return body_; }

 private:
  bool json_mode() const { return cfg_.format == "json"; }
  GroupPtr group() { return build_group(resolve_group(cfg_), cfg_.element_cap); }
  int finish(const Report& r, const Json& group_json, const std::string& table);
  void emit(const Json& doc) { body_ = doc.dump(2) + "\n"; }

  RunConfig cfg_;
  std::ostream& err_;
  std::string body_;
};

int Runner::finish(const Report& r, const Json& group_json, const std::string& table) {
  if (!r.passed() && !json_mode()) {
    Json record{{"status", "fail"}, {"group", group_json}, {"failures", json::encode_failures(r)}};
    err_ << record.dump() << "\n";
  }
  if (!json_mode()) body_ = table;
  return r.passed() ? kExitOk : kExitCheckFailed;
}

int Runner::list_groups() {
  Json doc = Json::array();
  std::ostringstream t;
  for (const auto& spec : supported_groups()) {
    doc.push_back(json::encode(spec));
    t << std::left << std::setw(8) << to_string(spec) << std::setw(24) << ("degrees " + join(degrees_of(spec).values()))
      << std::setw(14) << ("order " + order_of(spec).get_str()) << "conductor " << conductor_of(spec) << "\n";
  }
  if (json_mode()) {
    emit(doc);
  } else {
    body_ = t.str();
  }
  return kExitOk;
}

int Runner::degrees() {
  const GroupSpec spec = resolve_group(cfg_);
  if (json_mode()) {
    emit(json::encode(spec));
  } else {
    body_ = join(degrees_of(spec).values()) + "\n";
  }
  return kExitOk;
}

int Runner::triplet() {
  auto g = group();
  const AdmissibleTriplet t = load_triplet(g, cfg_);
  Report r = check_admissible(*g, t.g, t.zeta, t.q, g->initial_invariants());
  std::ostringstream s;
  s << "group " << g->name() << "\n";
  s << "zeta = " << t.zeta.to_string() << "\n";
  s << "g =\n" << matrix_rows(t.g, "  ");
  s << "q = [";
  for (std::size_t i = 0; i < t.q.size(); ++i) s << (i ? ", " : "") << t.q[i].to_string();
  s << "]\n";
  s << "z coordinates (rows, in root coordinates):\n" << matrix_rows(t.frame.z_basis, "  ");
  for (const auto& c : r.checks()) s << (c.passed ? "  pass  " : "  FAIL  ") << c.name << "\n";
  if (json_mode()) {
    emit({{"triplet", json::encode(t)},
          {"status", r.passed() ? "pass" : "fail"},
          {"checks", json::encode_checks(r)},
          {"failures", json::encode_failures(r)}});
  }
  return finish(r, json::encode(g->spec()), s.str());
}

int Runner::good_invariants() {
  auto g = group();
  const GoodBasis b = good_basic_invariants(load_triplet(g, cfg_));
  const int n = g->rank();
  std::ostringstream s;
  s << "group " << g->name() << ", degrees " << join(g->degrees().values()) << "\n";
  for (int a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    s << "x" << a + 1 << " = " << b.invariants[i].to_string("z") << "\n";
    s << "   = " << b.in_initial[i].to_string("p") << "  (p = initial invariants)\n";
    s << "x" << a + 1 << "(q) = " << b.values_at_q[i].to_string() << "\n";
  }
  if (json_mode()) {
    emit(json::encode(b));
  } else {
    body_ = s.str();
  }
  return kExitOk;
}

int Runner::frobenius(bool force_json) {
  auto g = group();
  const GoodBasis b = good_basic_invariants(load_triplet(g, cfg_));
  const FrobeniusData fd = build_frobenius(b);
  const Report r = verify_axioms(fd);
  if (force_json || json_mode()) {
    Json doc = json::encode(fd, r);
    doc["failures"] = json::encode_failures(r);
    emit(doc);
    return r.passed() ? kExitOk : kExitCheckFailed;
  }
  const int n = fd.n;
  std::ostringstream s;
  s << "group " << g->name() << ", c = x" << n << "(q) = " << fd.c.to_string() << "\n";
  s << "intersection form I*(dx^a, dx^b):\n";
  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c)
      s << "  (" << a + 1 << "," << c + 1 << ")  " << fd.intersection[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)].to_string() << "\n";
  s << "flat metric g^{ab}:\n" << matrix_rows(fd.metric.upper, "  ");
  s << "structure constants C_{ab}^c (nonzero):\n";
  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c)
      for (int e = 0; e < n; ++e)
        if (!fd.structure(a, c, e).is_zero())
          s << "  C_(" << a + 1 << "," << c + 1 << ")^" << e + 1 << " = " << fd.structure(a, c, e).to_string() << "\n";
  s << "potential F = " << fd.potential.to_string() << "\n";
  s << "checks:\n";
  for (const auto& c : r.checks()) s << (c.passed ? "  pass  " : "  FAIL  ") << c.name << "\n";
  return finish(r, json::encode(g->spec()), s.str());
}

int Runner::verify() {
  auto g = group();
  const auto sel = selected(cfg_);
  auto wants = [&](const std::string& s) { return std::find(sel.begin(), sel.end(), s) != sel.end(); };
  Report r;
  const AdmissibleTriplet t = load_triplet(g, cfg_);
  if (wants("admissible")) r.merge(check_admissible(*g, t.g, t.zeta, t.q, g->initial_invariants()), "admissible.");
  std::optional<GoodBasis> basis;
  if (wants("good") || wants("expansion") || wants("frobenius") || wants("equivalence")) basis = good_basic_invariants(t);
  if (wants("good")) r.merge(check_good(*basis), "good.");
  std::optional<PolyMatrix> intersection;
  if (wants("expansion")) {
    try {
      intersection = intersection_form(*basis);
      r.merge(expansion_identity_check(*basis, *intersection), "expansion.");
    } catch (const FrobeniusError& e) {
      r.add("expansion.expansion_identity", false, e.what());
    }
  }
  if (wants("frobenius")) {
    try {
      r.merge(verify_axioms(build_frobenius(*basis)), "frobenius.");
    } catch (const FrobeniusError& e) {
      r.add("frobenius.construction", false, e.what());
    }
  }
  if (wants("equivalence")) {
    for (const auto& [name, action] : sample_actions(*g, cfg_.seed)) {
      try {
        const AdmissibleTriplet other = transform_triplet(t, action);
        const bool same = same_good_span(*basis, good_basic_invariants(other));
        r.add("equivalence." + name, same, same ? "" : "good-invariant spans differ");
      } catch (const TripletError& e) {
        r.add("equivalence." + name, false, e.what());
      }
    }
  }
  std::ostringstream s;
  s << g->name() << "\n";
  for (const auto& c : r.checks()) {
    s << (c.passed ? "  pass  " : "  FAIL  ") << c.name;
    if (!c.passed && !c.detail.empty()) s << "  " << c.detail;
    s << "\n";
  }
  s << "status: " << (r.passed() ? "pass" : "fail") << "\n";
  if (json_mode()) {
    emit({{"group", json::encode(g->spec())},
          {"status", r.passed() ? "pass" : "fail"},
          {"checks", json::encode_checks(r)},
          {"failures", json::encode_failures(r)}});
  }
  return finish(r, json::encode(g->spec()), s.str());
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Good basic invariants and Frobenius structures of finite Coxeter groups", "refrob"};
  app.require_subcommand(1);
  app.add_option("--group", cfg.group, "Group name: A3, B4, D5, I2, I2(5), H3, F4, or a family with --rank");
  app.add_option("--rank", cfg.rank, "Rank for A, B, D");
  app.add_option("--m", cfg.m, "Edge label for I2");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--out", cfg.out_path, "Write the output here instead of stdout");
  app.add_option("--checks", cfg.checks, "Checks to run (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"admissible", "good", "expansion", "frobenius", "equivalence", "all"}));
  app.add_option("--conductor-cap", cfg.conductor_cap, "Largest cyclotomic conductor allowed")->check(CLI::PositiveNumber);
  app.add_option("--element-cap", cfg.element_cap, "Largest group closure allowed")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for the sampled equivalence triplets");
  app.add_option("--power", cfg.power, "Use (g^r, zeta^r, q) instead of the standard triplet");
  app.add_option("--conjugate", cfg.conjugate, "Conjugate the triplet by a word in the generators (1-based, comma separated)")
      ->delimiter(',');

  const std::vector<std::pair<std::string, std::string>> commands{
      {"list-groups", "List the supported groups"},
      {"degrees", "Print the degrees of the basic invariants"},
      {"triplet", "Show the admissible triplet and its admissibility checks"},
      {"good-invariants", "Compute good basic invariants"},
      {"frobenius", "Build and verify the Frobenius structure"},
      {"verify", "Run the selected exact checks"},
      {"export", "Write the Frobenius structure as JSON"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) subs[name] = app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (cfg.conductor_cap > 0) set_conductor_cap(cfg.conductor_cap);
  Runner runner(cfg, err);
  int code = kExitOk;
  try {
    if (command == "list-groups") code = runner.list_groups();
    if (command == "degrees") code = runner.degrees();
    if (command == "triplet") code = runner.triplet();
    if (command == "good-invariants") code = runner.good_invariants();
    if (command == "frobenius") code = runner.frobenius(false);
    if (command == "verify") code = runner.verify();
    if (command == "export") code = runner.frobenius(true);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedGroup& e) {
    err << "error: unsupported group: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GroupError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScalarError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TripletError& e) {
    err << Json{{"status", "fail"}, {"failures", {{{"check", "admissible"}, {"detail", e.what()}}}}}.dump() << "\n";
    return kExitCheckFailed;
  } catch (const FrobeniusError& e) {
    err << Json{{"status", "fail"}, {"failures", {{{"check", "frobenius"}, {"detail", e.what()}}}}}.dump() << "\n";
    return kExitCheckFailed;
  }

  if (cfg.out_path.empty()) {
    out << runner.body();
  } else {
    std::ofstream f(cfg.out_path);
    if (!f) {
      err << "error: cannot write " << cfg.out_path << "\n";
      return kExitUsage;
    }
    f << runner.body();
  }
  return code;
}

}  // namespace refrob::cli
