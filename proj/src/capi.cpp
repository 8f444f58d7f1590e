#include "drg.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "drg/ambiguity.hpp"
#include "drg/equilibrium.hpp"
#include "drg/experiment.hpp"
#include "drg/gamefile.hpp"

struct drg_game {
  drg::GameDefinition def;
};

namespace {

using ordered_json = nlohmann::ordered_json;

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Rebuild a StrategyProfile from the flat per-player layout.
drg::StrategyProfile unflatten(const drg::GameShape& shape, const double* profile, size_t len) {
  size_t expected = 0;
  for (int a : shape.action_counts) expected += static_cast<size_t>(a);
  if (profile == nullptr || len != expected)
    throw std::invalid_argument("profile must have " + std::to_string(expected) + " entries");
  std::vector<drg::MixedStrategy> strategies;
  size_t pos = 0;
  for (int a : shape.action_counts) {
    std::vector<double> p(profile + pos, profile + pos + a);
    strategies.push_back(drg::MixedStrategy(std::move(p)));
    pos += static_cast<size_t>(a);
  }
  return {std::move(strategies)};
}

ordered_json profile_json(const drg::StrategyProfile& x) {
  ordered_json j = ordered_json::array();
  for (const drg::MixedStrategy& s : x.strategies) j.push_back(s.probs());
  return j;
}

ordered_json gap_report_json(const drg::GapReport& rep) {
  ordered_json j;
  j["gaps"] = rep.gaps;
  j["current_values"] = rep.current_values;
  j["best_values"] = rep.best_values;
  ordered_json w = ordered_json::array();
  for (const drg::MixedStrategy& s : rep.witnesses) w.push_back(s.probs());
  j["witnesses"] = std::move(w);
  j["total"] = rep.total;
  return j;
}

ordered_json certificate_json(const drg::EquilibriumCertificate& cert) {
  ordered_json j;
  j["profile"] = profile_json(cert.profile);
  ordered_json players = ordered_json::array();
  for (const drg::PlayerCertificate& pc : cert.players) {
    ordered_json p;
    p["alpha"] = pc.alpha;
    p["zeta"] = pc.zeta;
    p["rho"] = pc.rho;
    p["gamma"] = pc.gamma;
    p["beta"] = pc.beta;
    p["lambda"] = pc.lambda;
    p["kappa"] = pc.kappa;
    p["delta"] = pc.delta;
    p["nu"] = pc.nu;
    p["xi"] = pc.xi;
    p["theta"] = pc.theta;
    p["tau"] = pc.tau;
    p["f"] = pc.f_vec;
    p["phi"] = pc.phi;
    p["g"] = pc.g_vec;
    players.push_back(std::move(p));
  }
  j["players"] = std::move(players);
  ordered_json rows = ordered_json::array();
  for (const drg::CertificateRow& r : cert.rows) {
    ordered_json row;
    row["name"] = r.name;
    row["equality"] = r.equality;
    row["residual"] = r.residual;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["max_equality_residual"] = cert.max_equality_residual;
  j["max_inequality_violation"] = cert.max_inequality_violation;
  j["valid"] = cert.valid();
  return j;
}

// validate() before solving; DRG_ERR_VALIDATION carries the report summary.
int require_valid(const drg_game* game) {
  drg::ValidationReport rep = drg::validate(game->def.f);
  if (!rep.pass()) return fail(DRG_ERR_VALIDATION, rep.summary());
  return DRG_OK;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(DRG_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(DRG_ERR_RUNTIME, e.what());
  }
}

}  // namespace

extern "C" {

int drg_game_from_string(const char* json_text, drg_game** out) {
  if (json_text == nullptr || out == nullptr)
    return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    try {
      *out = new drg_game{drg::parse_game(json_text)};
    } catch (const std::invalid_argument& e) {
      return fail(DRG_ERR_PARSE, e.what());
    }
    return DRG_OK;
  });
}

int drg_game_from_file(const char* path, drg_game** out) {
  if (path == nullptr || out == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    try {
      *out = new drg_game{drg::load_game(path)};
    } catch (const std::invalid_argument& e) {
      return fail(DRG_ERR_PARSE, e.what());
    }
    return DRG_OK;
  });
}

int drg_game_inspection(double wage, double g_lo, double g_hi, double v_lo, double v_hi,
                        double h_lo, double h_hi, double s, double eps1, double eps2,
                        drg_game** out) {
  if (out == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    drg::InspectionParams p;
    p.wage = wage;
    p.g_lo = g_lo;
    p.g_hi = g_hi;
    p.v_lo = v_lo;
    p.v_hi = v_hi;
    p.h_lo = h_lo;
    p.h_hi = h_hi;
    p.s = s;
    *out = new drg_game{drg::inspection_game_definition(p, eps1, eps2)};
    return DRG_OK;
  });
}

void drg_game_free(drg_game* game) { delete game; }

int drg_game_emit(const drg_game* game, char** out_json) {
  if (game == nullptr || out_json == nullptr)
    return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    *out_json = dup_string(drg::emit_game(game->def));
    return DRG_OK;
  });
}

int drg_validate(const drg_game* game, char** out_report, int* out_pass) {
  if (game == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    drg::ValidationReport rep = drg::validate(game->def.f);
    if (out_report != nullptr) {
      ordered_json j = ordered_json::array();
      for (const drg::ValidationCheck& c : rep.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["detail"] = c.detail;
        j.push_back(std::move(cj));
      }
      *out_report = dup_string(j.dump(2) + "\n");
    }
    if (out_pass != nullptr) *out_pass = rep.pass() ? 1 : 0;
    return DRG_OK;
  });
}

int drg_best_response(const drg_game* game, int player, const double* profile,
                      size_t profile_len, char** out_json) {
  if (game == nullptr || out_json == nullptr)
    return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    if (player < 0 || player >= game->def.f.shape.num_players)
      return fail(DRG_ERR_INVALID_ARGUMENT, "player index out of range");
    if (int rc = require_valid(game); rc != DRG_OK) return rc;
    drg::StrategyProfile x = unflatten(game->def.f.shape, profile, profile_len);
    drg::BestResponseResult br =
        drg::best_response(game->def.f, game->def.risk.eps[player], x, player);
    ordered_json j;
    j["player"] = player;
    j["strategy"] = br.strategy.probs();
    j["value"] = br.value;
    *out_json = dup_string(j.dump(2) + "\n");
    return DRG_OK;
  });
}

int drg_verify(const drg_game* game, const double* profile, size_t profile_len, double tol,
               char** out_json, int* out_is_equilibrium) {
  if (game == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    if (tol <= 0.0) return fail(DRG_ERR_INVALID_ARGUMENT, "tolerance must be positive");
    if (int rc = require_valid(game); rc != DRG_OK) return rc;
    drg::StrategyProfile x = unflatten(game->def.f.shape, profile, profile_len);
    drg::VerifyResult res = drg::verify_equilibrium(game->def.f, game->def.risk, x, tol);
    if (out_json != nullptr) {
      ordered_json j;
      j["is_equilibrium"] = res.is_equilibrium;
      j["tol"] = res.tol;
      j["report"] = gap_report_json(res.report);
      *out_json = dup_string(j.dump(2) + "\n");
    }
    if (out_is_equilibrium != nullptr) *out_is_equilibrium = res.is_equilibrium ? 1 : 0;
    return DRG_OK;
  });
}

int drg_certify(const drg_game* game, const double* profile, size_t profile_len, char** out_json,
                int* out_valid) {
  if (game == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    if (int rc = require_valid(game); rc != DRG_OK) return rc;
    drg::StrategyProfile x = unflatten(game->def.f.shape, profile, profile_len);
    drg::EquilibriumCertificate cert = drg::build_certificate(game->def.f, game->def.risk, x);
    if (out_json != nullptr) *out_json = dup_string(certificate_json(cert).dump(2) + "\n");
    if (out_valid != nullptr) *out_valid = cert.valid() ? 1 : 0;
    return DRG_OK;
  });
}

int drg_solve(const drg_game* game, int restarts, unsigned long long seed, double gap_tol,
              char** out_json) {
  if (game == nullptr || out_json == nullptr)
    return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    if (int rc = require_valid(game); rc != DRG_OK) return rc;
    drg::SearchConfig cfg;
    if (restarts > 0) cfg.restarts = restarts;
    cfg.seed = seed;
    if (gap_tol > 0.0) cfg.gap_tol = gap_tol;
    std::vector<drg::FoundEquilibrium> found =
        drg::find_equilibria(game->def.f, game->def.risk, cfg);
    ordered_json j;
    j["num_equilibria"] = found.size();
    ordered_json eqs = ordered_json::array();
    for (const drg::FoundEquilibrium& eq : found) {
      ordered_json ej;
      ej["profile"] = profile_json(eq.profile);
      ej["gap"] = eq.gap;
      ej["certificate_max_equality_residual"] = eq.certificate.max_equality_residual;
      ej["certificate_max_inequality_violation"] = eq.certificate.max_inequality_violation;
      ej["certificate_valid"] = eq.certificate.valid();
      eqs.push_back(std::move(ej));
    }
    j["equilibria"] = std::move(eqs);
    *out_json = dup_string(j.dump(2) + "\n");
    return DRG_OK;
  });
}

int drg_experiment(const char* spec_json, char** out_csv, char** out_json) {
  if (spec_json == nullptr) return fail(DRG_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> int {
    ordered_json doc;
    try {
      doc = ordered_json::parse(spec_json);
    } catch (const std::exception& e) {
      return fail(DRG_ERR_PARSE, std::string("experiment spec: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("grid"))
      return fail(DRG_ERR_PARSE, "experiment spec: grid is required");

    drg::InspectionParams p;
    if (doc.contains("inspection")) {
      const ordered_json& ij = doc["inspection"];
      if (ij.contains("wage")) p.wage = ij["wage"].get<double>();
      if (ij.contains("g")) {
        p.g_lo = ij["g"][0].get<double>();
        p.g_hi = ij["g"][1].get<double>();
      }
      if (ij.contains("v")) {
        p.v_lo = ij["v"][0].get<double>();
        p.v_hi = ij["v"][1].get<double>();
      }
      if (ij.contains("h")) {
        p.h_lo = ij["h"][0].get<double>();
        p.h_hi = ij["h"][1].get<double>();
      }
      if (ij.contains("s")) p.s = ij["s"].get<double>();
      if (ij.contains("mean") && ij["mean"].is_array())
        p.explicit_mean = ij["mean"].get<std::vector<double>>();
    }

    std::vector<std::pair<double, double>> grid;
    for (const auto& point : doc["grid"]) {
      if (!point.is_array() || point.size() != 2)
        return fail(DRG_ERR_PARSE, "experiment spec: grid entries must be [eps1, eps2]");
      grid.emplace_back(point[0].get<double>(), point[1].get<double>());
    }

    drg::SearchConfig cfg;
    if (doc.contains("search")) {
      const ordered_json& sj = doc["search"];
      if (sj.contains("restarts")) cfg.restarts = sj["restarts"].get<int>();
      if (sj.contains("seed")) cfg.seed = sj["seed"].get<std::uint64_t>();
      if (sj.contains("gap_tol")) cfg.gap_tol = sj["gap_tol"].get<double>();
      if (sj.contains("dedupe_radius")) cfg.dedupe_radius = sj["dedupe_radius"].get<double>();
      if (sj.contains("max_iterations")) cfg.max_iterations = sj["max_iterations"].get<int>();
    }

    drg::ExperimentReport report = drg::run_experiment(p, grid, cfg);
    if (out_csv != nullptr) *out_csv = dup_string(drg::experiment_csv(report));
    if (out_json != nullptr) *out_json = dup_string(drg::experiment_json(report));
    return DRG_OK;
  });
}

const char* drg_last_error(void) { return g_last_error.c_str(); }

void drg_string_free(char* s) { std::free(s); }

}  // extern "C"
