#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "drg.h"

using nlohmann::json;

namespace {

struct GameHandle {
  drg_game* g = nullptr;
  ~GameHandle() { drg_game_free(g); }
};

struct StringHandle {
  char* s = nullptr;
  ~StringHandle() { drg_string_free(s); }
  json parse() const { return json::parse(std::string(s)); }
};

GameHandle inspection(double eps1, double eps2, double s = 4.0) {
  GameHandle h;
  REQUIRE(drg_game_inspection(15, 8, 12, 16, 24, 4, 6, s, eps1, eps2, &h.g) == DRG_OK);
  return h;
}

}  // namespace

TEST_CASE("round-trip through emit and from_string") {
  GameHandle a = inspection(1.0, 0.5);
  StringHandle doc;
  REQUIRE(drg_game_emit(a.g, &doc.s) == DRG_OK);
  GameHandle b;
  REQUIRE(drg_game_from_string(doc.s, &b.g) == DRG_OK);
  StringHandle doc2;
  REQUIRE(drg_game_emit(b.g, &doc2.s) == DRG_OK);
  CHECK(std::string(doc.s) == std::string(doc2.s));
}

TEST_CASE("null arguments and bad documents yield the right codes") {
  CHECK(drg_game_from_string(nullptr, nullptr) == DRG_ERR_INVALID_ARGUMENT);
  drg_game* g = nullptr;
  CHECK(drg_game_from_string("{broken", &g) == DRG_ERR_PARSE);
  CHECK(std::strlen(drg_last_error()) > 0);
  CHECK(drg_game_from_file("/nonexistent/path.json", &g) != DRG_OK);
  CHECK(drg_game_inspection(15, 12, 8, 16, 24, 4, 6, 4, 1, 1, &g) ==
        DRG_ERR_INVALID_ARGUMENT);  // g_lo > g_hi
  drg_game_free(nullptr);           // must be a no-op
  drg_string_free(nullptr);
}

TEST_CASE("validate reports per-check results") {
  GameHandle h = inspection(1.0, 1.0);
  StringHandle rep;
  int pass = 0;
  REQUIRE(drg_validate(h.g, &rep.s, &pass) == DRG_OK);
  CHECK(pass == 1);
  json j = rep.parse();
  REQUIRE(j.is_array());
  CHECK(j.size() == 4);
  for (const auto& c : j) {
    CHECK(c.contains("name"));
    CHECK(c["pass"].get<bool>());
  }
}

TEST_CASE("invalid ambiguity sets are rejected by solver entry points") {
  // Mean far outside the support: validation must gate the solve.
  const char* doc = R"({
    "players": 2, "actions": [2, 2], "risk": [1, 1],
    "ambiguity": {
      "s": 1.0,
      "mean": [100, 0, 0, 0, 0, 0, 0, 0],
      "support": {"w": [[1,0,0,0,0,0,0,0],[-1,0,0,0,0,0,0,0],
                        [0,1,0,0,0,0,0,0],[0,-1,0,0,0,0,0,0],
                        [0,0,1,0,0,0,0,0],[0,0,-1,0,0,0,0,0],
                        [0,0,0,1,0,0,0,0],[0,0,0,-1,0,0,0,0],
                        [0,0,0,0,1,0,0,0],[0,0,0,0,-1,0,0,0],
                        [0,0,0,0,0,1,0,0],[0,0,0,0,0,-1,0,0],
                        [0,0,0,0,0,0,1,0],[0,0,0,0,0,0,-1,0],
                        [0,0,0,0,0,0,0,1],[0,0,0,0,0,0,0,-1]],
                  "h": [1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]}
    }
  })";
  GameHandle h;
  REQUIRE(drg_game_from_string(doc, &h.g) == DRG_OK);  // parsing still succeeds
  int pass = 1;
  StringHandle rep;
  REQUIRE(drg_validate(h.g, &rep.s, &pass) == DRG_OK);
  CHECK(pass == 0);
  StringHandle out;
  CHECK(drg_solve(h.g, 2, 1, 1e-6, &out.s) == DRG_ERR_VALIDATION);
  double profile[4] = {0.5, 0.5, 0.5, 0.5};
  CHECK(drg_best_response(h.g, 0, profile, 4, &out.s) == DRG_ERR_VALIDATION);
}

TEST_CASE("best response through the C API") {
  GameHandle h = inspection(1.0, 1.0);
  double profile[4] = {0.5, 0.5, 2.0 / 3.0, 1.0 / 3.0};
  StringHandle out;
  REQUIRE(drg_best_response(h.g, 0, profile, 4, &out.s) == DRG_OK);
  json j = out.parse();
  CHECK(j["value"].get<double>() == doctest::Approx(-5.0).epsilon(1e-7));
  CHECK(j["strategy"].size() == 2);
  // Bad player index and wrong profile length.
  CHECK(drg_best_response(h.g, 5, profile, 4, &out.s) == DRG_ERR_INVALID_ARGUMENT);
  CHECK(drg_best_response(h.g, 0, profile, 3, &out.s) == DRG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verify and certify through the C API") {
  GameHandle h = inspection(1.0, 1.0);
  double eq[4] = {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0};
  double noneq[4] = {1, 0, 1, 0};

  StringHandle v;
  int is_eq = 0;
  REQUIRE(drg_verify(h.g, eq, 4, 1e-6, &v.s, &is_eq) == DRG_OK);
  CHECK(is_eq == 1);
  json jv = v.parse();
  CHECK(jv["report"]["total"].get<double>() <= 1e-6);
  CHECK(jv["report"]["gaps"].size() == 2);

  StringHandle v2;
  REQUIRE(drg_verify(h.g, noneq, 4, 1e-6, &v2.s, &is_eq) == DRG_OK);
  CHECK(is_eq == 0);

  StringHandle c;
  int valid = 0;
  REQUIRE(drg_certify(h.g, eq, 4, &c.s, &valid) == DRG_OK);
  CHECK(valid == 1);
  json jc = c.parse();
  CHECK(jc["max_equality_residual"].get<double>() <= 1e-6);
  CHECK(jc["rows"].is_array());
  CHECK(jc["players"].size() == 2);

  StringHandle c2;
  REQUIRE(drg_certify(h.g, noneq, 4, &c2.s, &valid) == DRG_OK);
  CHECK(valid == 0);
}

TEST_CASE("solve finds the mixed equilibrium and is deterministic") {
  GameHandle h = inspection(1.0, 1.0);
  StringHandle a, b;
  REQUIRE(drg_solve(h.g, 4, 42, 1e-6, &a.s) == DRG_OK);
  REQUIRE(drg_solve(h.g, 4, 42, 1e-6, &b.s) == DRG_OK);
  CHECK(std::string(a.s) == std::string(b.s));
  json j = a.parse();
  REQUIRE(j["equilibria"].size() == 1);
  const json& eq = j["equilibria"][0];
  CHECK(eq["profile"][0][0].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(eq["profile"][1][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(eq["gap"].get<double>() <= 1e-6);
  CHECK(eq["certificate_valid"].get<bool>());
}

TEST_CASE("experiment endpoint produces CSV and JSON") {
  const char* spec = R"({
    "inspection": {"wage": 15, "g": [8, 12], "v": [16, 24], "h": [4, 6], "s": 4},
    "grid": [[1.0, 1.0], [1.0, 0.5]],
    "search": {"restarts": 4, "seed": 42, "gap_tol": 1e-6}
  })";
  StringHandle csv, js;
  REQUIRE(drg_experiment(spec, &csv.s, &js.s) == DRG_OK);
  std::string c(csv.s);
  CHECK(c.rfind("eps1,eps2,x1_1,x2_1,payoff1,payoff2,gap\n", 0) == 0);
  CHECK(c.find("\n1,1,0.333333333,0.666666667,") != std::string::npos);
  json j = js.parse();
  CHECK(j["grid"].size() == 2);
  CHECK(j["equilibria"].is_array());

  // CSV-only call and malformed spec.
  StringHandle csv2;
  REQUIRE(drg_experiment(spec, &csv2.s, nullptr) == DRG_OK);
  CHECK(std::string(csv2.s) == c);
  CHECK(drg_experiment("{", &csv2.s, nullptr) == DRG_ERR_PARSE);
}
