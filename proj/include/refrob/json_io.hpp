#pragma once

// JSON encodings. Big integers are decimal strings; polynomial terms keep the
// descending graded-lex storage order; matrices are row-major.

#include <json.hpp>

#include "refrob/frobenius.hpp"
#include "refrob/goodbasis.hpp"
#include "refrob/groups.hpp"
#include "refrob/report.hpp"

namespace refrob::json {

using Json = nlohmann::ordered_json;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"conductor": N, "coords": [["num", "den"], ...]}
Json encode(const CycScalar& a);
CycScalar decode_scalar(const Json& j);

Json encode(const Vector& v);
Vector decode_vector(const Json& j);

Json encode(const Matrix& m);
Matrix decode_matrix(const Json& j);

// {"vars": n, "terms": [{"exp": [...], "coeff": scalar}, ...]}
Json encode(const MultiPoly& f);
MultiPoly decode_poly(const Json& j);

Json encode(const PolyMatrix& m);
PolyMatrix decode_poly_matrix(const Json& j);

// {"family", "rank", "m", "degrees", "order", "conductor"}
Json encode(const GroupSpec& spec);
GroupSpec decode_group(const Json& j);

// {"group", "g", "zeta", "q", "z_basis", "dual_gram"}. Decoding rebuilds the
// group and revalidates the triplet.
Json encode(const AdmissibleTriplet& t);
AdmissibleTriplet decode_triplet(const Json& j, std::size_t element_cap = kDefaultElementCap);

// {"invariants", "root_invariants", "in_initial", "values_at_q", "triplet"}
Json encode(const GoodBasis& b);
GoodBasis decode_good_basis(const Json& j, std::size_t element_cap = kDefaultElementCap);

// {"name": "pass" | "fail", ...}
Json encode_checks(const Report& r);
// [{"check", "detail"}] for the failed checks.
Json encode_failures(const Report& r);

// {"group", "c", "metric", "intersection", "structure_constants": {"(a,b,g)": poly},
//  "potential", "checks", "basis"}, indices 1-based.
Json encode(const FrobeniusData& fd, const Report& checks);
FrobeniusData decode_frobenius(const Json& j, std::size_t element_cap = kDefaultElementCap);

}  // namespace refrob::json
