#include "refrob/json_io.hpp"

#include <cstdio>
#include <string>

namespace refrob::json {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DecodeError(std::string("missing field '") + key + "'");
  return j.at(key);
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw DecodeError(std::string(what) + " must be an array");
  return j;
}

Integer parse_integer(const Json& j) {
  if (!j.is_string()) throw DecodeError("big integers are encoded as decimal strings");
  Integer v;
  if (v.set_str(j.get<std::string>(), 10) != 0) throw DecodeError("bad integer '" + j.get<std::string>() + "'");
  return v;
}

std::string key_of(int a, int b, int g) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(g + 1) + ")";
}

}  // namespace

Json encode(const CycScalar& a) {
  Json coords = Json::array();
  for (const Rational& r : a.coords()) coords.push_back({r.get_num().get_str(), r.get_den().get_str()});
  return {{"conductor", a.conductor()}, {"coords", std::move(coords)}};
}

CycScalar decode_scalar(const Json& j) {
  const int n = field(j, "conductor").get<int>();
  if (n < 1) throw DecodeError("conductor must be positive");
  std::vector<Rational> coords;
  for (const Json& c : array(field(j, "coords"), "coords")) {
    if (!c.is_array() || c.size() != 2) throw DecodeError("a coordinate is a [num, den] pair");
    const Integer den = parse_integer(c[1]);
    if (den == 0) throw DecodeError("zero denominator");
    Rational r(parse_integer(c[0]), den);
    r.canonicalize();
    coords.push_back(r);
  }
  if (static_cast<int>(coords.size()) != euler_phi(n)) throw DecodeError("coordinate count does not match the conductor");
  return CycScalar::from_coords(n, coords);
}

Json encode(const Vector& v) {
  Json out = Json::array();
  for (const auto& a : v) out.push_back(encode(a));
  return out;
}

Vector decode_vector(const Json& j) {
  Vector v;
  for (const Json& e : array(j, "vector")) v.push_back(decode_scalar(e));
  return v;
}

Json encode(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (const auto& a : m.row(i)) row.push_back(encode(a));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix decode_matrix(const Json& j) {
  std::vector<Vector> rows;
  for (const Json& r : array(j, "matrix")) rows.push_back(decode_vector(r));
  if (rows.empty()) return {};
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw DecodeError("ragged matrix");
  return Matrix::from_rows(rows);
}

Json encode(const MultiPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", e.to_vector()}, {"coeff", encode(c)}});
  return {{"vars", f.nvars()}, {"terms", std::move(terms)}};
}

MultiPoly decode_poly(const Json& j) {
  const int n = field(j, "vars").get<int>();
  if (n < 1 || n > 8) throw DecodeError("vars must be between 1 and 8");
  std::vector<MultiPoly::Term> terms;
  for (const Json& t : array(field(j, "terms"), "terms")) {
    const auto exps = field(t, "exp").get<std::vector<int>>();
    if (static_cast<int>(exps.size()) != n) throw DecodeError("exponent length does not match vars");
    for (int e : exps)
      if (e < 0 || e > 127) throw DecodeError("exponent out of range");
    terms.emplace_back(ExpVec(std::span<const int>(exps)), decode_scalar(field(t, "coeff")));
  }
  return MultiPoly::from_terms(n, std::move(terms));
}

Json encode(const PolyMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& f : row) r.push_back(encode(f));
    out.push_back(std::move(r));
  }
  return out;
}

PolyMatrix decode_poly_matrix(const Json& j) {
  PolyMatrix out;
  for (const Json& row : array(j, "polynomial matrix")) {
    std::vector<MultiPoly> r;
    for (const Json& f : array(row, "polynomial matrix row")) r.push_back(decode_poly(f));
    out.push_back(std::move(r));
  }
  return out;
}

Json encode(const GroupSpec& spec) {
  return {{"family", family_name(spec.family)},
          {"rank", spec.rank},
          {"m", spec.family == Family::I2 ? spec.m : 0},
          {"degrees", degrees_of(spec).values()},
          {"order", order_of(spec).get_str()},
          {"conductor", conductor_of(spec)}};
}

GroupSpec decode_group(const Json& j) {
  GroupSpec spec;
  spec.family = parse_family(field(j, "family").get<std::string>());
  spec.rank = field(j, "rank").get<int>();
  spec.m = j.contains("m") ? j.at("m").get<int>() : 0;
  validate(spec);
  if (j.contains("degrees") && j.at("degrees").get<std::vector<int>>() != degrees_of(spec).values()) {
    throw DecodeError("degrees do not match the group");
  }
  return spec;
}

Json encode(const AdmissibleTriplet& t) {
  return {{"group", encode(t.group->spec())},
          {"g", encode(t.g)},
          {"zeta", encode(t.zeta)},
          {"q", encode(t.q)},
          {"z_basis", encode(t.frame.z_basis)},
          {"dual_gram", encode(t.frame.dual_gram)}};
}

AdmissibleTriplet decode_triplet(const Json& j, std::size_t element_cap) {
  auto group = build_group(decode_group(field(j, "group")), element_cap);
  auto lift = [&](Vector v) {
    for (auto& a : v) a = group->at_conductor(a);
    return v;
  };
  const Matrix g0 = decode_matrix(field(j, "g"));
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < g0.rows(); ++i) rows.push_back(lift(Vector(g0.row(i).begin(), g0.row(i).end())));
  const Matrix g = Matrix::from_rows(rows);
  auto t = make_triplet(group, g, group->at_conductor(decode_scalar(field(j, "zeta"))),
                        lift(decode_vector(field(j, "q"))));
  if (j.contains("z_basis") && !(decode_matrix(j.at("z_basis")) == t.frame.z_basis)) {
    throw DecodeError("z_basis does not match the frame rebuilt from (g, zeta, q)");
  }
  return t;
}

Json encode(const GoodBasis& b) {
  Json inv = Json::array(), root = Json::array(), init = Json::array();
  for (const auto& f : b.invariants) inv.push_back(encode(f));
  for (const auto& f : b.root_invariants) root.push_back(encode(f));
  for (const auto& f : b.in_initial) init.push_back(encode(f));
  return {{"invariants", std::move(inv)},
          {"root_invariants", std::move(root)},
          {"in_initial", std::move(init)},
          {"values_at_q", encode(b.values_at_q)},
          {"triplet", encode(b.triplet)}};
}

GoodBasis decode_good_basis(const Json& j, std::size_t element_cap) {
  GoodBasis b;
  b.triplet = decode_triplet(field(j, "triplet"), element_cap);
  for (const Json& f : array(field(j, "invariants"), "invariants")) b.invariants.push_back(decode_poly(f));
  if (static_cast<int>(b.invariants.size()) != b.triplet.group->rank()) throw DecodeError("wrong number of invariants");
  if (j.contains("root_invariants")) {
    for (const Json& f : j.at("root_invariants")) b.root_invariants.push_back(decode_poly(f));
  } else {
    for (const auto& f : b.invariants) b.root_invariants.push_back(subst_linear(f, b.triplet.frame.z_basis));
  }
  if (j.contains("in_initial"))
    for (const Json& f : j.at("in_initial")) b.in_initial.push_back(decode_poly(f));
  b.values_at_q = decode_vector(field(j, "values_at_q"));
  return b;
}

Json encode_checks(const Report& r) {
  Json out = Json::object();
  for (const auto& c : r.checks()) out[c.name] = c.passed ? "pass" : "fail";
  return out;
}

Json encode_failures(const Report& r) {
  Json out = Json::array();
  for (const auto& c : r.checks())
    if (!c.passed) out.push_back({{"check", c.name}, {"detail", c.detail}});
  return out;
}

Json encode(const FrobeniusData& fd, const Report& checks) {
  Json sc = Json::object();
  for (int a = 0; a < fd.n; ++a)
    for (int b = 0; b < fd.n; ++b)
      for (int g = 0; g < fd.n; ++g)
        if (!fd.structure(a, b, g).is_zero()) sc[key_of(a, b, g)] = encode(fd.structure(a, b, g));
  return {{"group", encode(fd.basis.triplet.group->spec())},
          {"c", encode(fd.c)},
          {"metric", encode(fd.metric.upper)},
          {"intersection", encode(fd.intersection)},
          {"structure_constants", std::move(sc)},
          {"potential", encode(fd.potential)},
          {"checks", encode_checks(checks)},
          {"basis", encode(fd.basis)}};
}

FrobeniusData decode_frobenius(const Json& j, std::size_t element_cap) {
  FrobeniusData fd;
  fd.basis = decode_good_basis(field(j, "basis"), element_cap);
  if (!(decode_group(field(j, "group")) == fd.basis.triplet.group->spec())) {
    throw DecodeError("group does not match the basis");
  }
  const auto& group = *fd.basis.triplet.group;
  fd.n = group.rank();
  fd.degrees = group.degrees();
  fd.c = decode_scalar(field(j, "c"));
  fd.intersection = decode_poly_matrix(field(j, "intersection"));
  fd.metric.upper = decode_matrix(field(j, "metric"));
  try {
    fd.metric.lower = inverse(fd.metric.upper);
  } catch (const LinalgError&) {
    throw DecodeError("metric is degenerate");
  }
  const auto n = static_cast<std::size_t>(fd.n);
  fd.structure = {fd.n, std::vector<MultiPoly>(n * n * n, MultiPoly(fd.n))};
  const Json& sc = field(j, "structure_constants");
  for (auto it = sc.begin(); it != sc.end(); ++it) {
    int a = 0, b = 0, g = 0;
    if (std::sscanf(it.key().c_str(), "(%d,%d,%d)", &a, &b, &g) != 3 || a < 1 || b < 1 || g < 1 || a > fd.n ||
        b > fd.n || g > fd.n) {
      throw DecodeError("bad structure constant key '" + it.key() + "'");
    }
    fd.structure(a - 1, b - 1, g - 1) = decode_poly(it.value());
  }
  fd.potential = decode_poly(field(j, "potential"));
  fd.euler_weights = euler_field(fd.degrees);
  fd.unit_index = fd.n - 1;
  return fd;
}

}  // namespace refrob::json
