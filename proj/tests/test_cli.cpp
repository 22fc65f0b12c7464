#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "refrob/cli.hpp"
#include "refrob/json_io.hpp"

using namespace refrob;
using json::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("degrees") {
  CHECK(run({"degrees", "--group", "H3"}).out == "2 6 10\n");
  CHECK(run({"degrees", "--group", "A", "--rank", "4"}).out == "2 3 4 5\n");
  CHECK(run({"degrees", "--group", "B5"}).out == "2 4 6 8 10\n");
  CHECK(run({"degrees", "--group", "I2", "--m", "7"}).out == "2 7\n");
  CHECK(run({"degrees", "--group", "I2(7)"}).out == "2 7\n");
  CHECK(run({"--group", "F4", "degrees"}).out == "2 6 8 12\n");
  const Json j = Json::parse(run({"degrees", "--group", "D5", "--format", "json"}).out);
  CHECK(j["degrees"] == Json::array({2, 4, 5, 6, 8}));
}

TEST_CASE("usage errors and unsupported groups exit 2") {
  const Result d4 = run({"verify", "--group", "D", "--rank", "4"});
  CHECK(d4.code == 2);
  CHECK(d4.err.find("normaliz") != std::string::npos);
  CHECK(run({"degrees", "--group", "H4"}).code == 2);
  CHECK(run({"degrees", "--group", "E6"}).code == 2);
  CHECK(run({"degrees"}).code == 2);
  CHECK(run({"degrees", "--group", "A"}).code == 2);
  CHECK(run({"degrees", "--group", "A3", "--rank", "4"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "--group", "A3", "--checks", "bogus"}).code == 2);
  CHECK(run({"verify", "--group", "A3", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify reports every identity") {
  const Result r = run({"verify", "--group", "I2", "--m", "5", "--checks", "all", "--format", "json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["status"] == "pass");
  CHECK(j["failures"].empty());
  for (const char* key : {"admissible.eigenvector", "good.goodness", "good.delta", "good.congruence",
                          "expansion.expansion_identity", "frobenius.associativity", "frobenius.isometry",
                          "equivalence.conjugate", "equivalence.scale", "equivalence.power"}) {
    CAPTURE(key);
    CHECK(j["checks"][key] == "pass");
  }
}

TEST_CASE("selectors compose") {
  const Json j = Json::parse(run({"verify", "--group", "A3", "--checks", "good,expansion", "--format", "json"}).out);
  for (auto it = j["checks"].begin(); it != j["checks"].end(); ++it) {
    const std::string k = it.key();
    CHECK((k.rfind("good.", 0) == 0 || k.rfind("expansion.", 0) == 0));
  }
  const Json j2 = Json::parse(
      run({"verify", "--group", "A3", "--checks", "admissible", "--checks", "good", "--format", "json"}).out);
  CHECK(j2["checks"].contains("admissible.regular"));
  CHECK(j2["checks"].contains("good.delta"));
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"verify", "--group", "B3", "--format", "json", "--seed", "4"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> exp{"export", "--group", "A3"};
  CHECK(run(exp).out == run(exp).out);
}

TEST_CASE("triplet options") {
  const Result ok = run({"triplet", "--group", "H3", "--power", "3", "--format", "json"});
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out)["status"] == "pass");
  const Result bad = run({"triplet", "--group", "H3", "--power", "2"});
  CHECK(bad.code == 1);
  CHECK(Json::parse(bad.err)["status"] == "fail");
  CHECK(run({"good-invariants", "--group", "A3", "--conjugate", "1,3"}).code == 0);
  CHECK(run({"good-invariants", "--group", "A3", "--conjugate", "9"}).code == 2);
}

TEST_CASE("tables") {
  const Result list = run({"list-groups"});
  CHECK(list.code == 0);
  CHECK(list.out.find("H3") != std::string::npos);
  CHECK(list.out.find("I2(12)") != std::string::npos);
  const Result gi = run({"good-invariants", "--group", "I2", "--m", "4"});
  CHECK(gi.out.find("x1 = z1*z2") != std::string::npos);
  const Result fr = run({"frobenius", "--group", "I2(4)"});
  CHECK(fr.code == 0);
  CHECK(fr.out.find("potential F = 1/60*x1^5 + 1/2*x1*x2^2") != std::string::npos);
}

TEST_CASE("export writes a decodable document") {
  const std::string path = "refrob_test_export.json";
  CHECK(run({"export", "--group", "B2", "--out", path}).code == 0);
  std::ifstream in(path);
  const Json j = Json::parse(in);
  const FrobeniusData fd = json::decode_frobenius(j);
  CHECK(verify_axioms(fd).passed());
  CHECK(j["checks"]["potential"] == "pass");
  std::remove(path.c_str());
}

TEST_CASE("conductor cap") {
  const Result r = run({"verify", "--group", "H3", "--conductor-cap", "5"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  set_conductor_cap(120);
}
