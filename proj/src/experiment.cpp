#include "drg/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "drg/risk.hpp"

namespace drg {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ExperimentReport run_experiment(const InspectionParams& p,
                                const std::vector<std::pair<double, double>>& eps_grid,
                                const SearchConfig& config) {
  InspectionGame game = build_inspection_game(p);
  ExperimentReport report;
  for (const auto& [eps1, eps2] : eps_grid) {
    RiskProfile risk({eps1, eps2});
    auto start = std::chrono::steady_clock::now();
    std::vector<FoundEquilibrium> found = find_equilibria(game.f, risk, config);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.grid.push_back({eps1, eps2, static_cast<int>(found.size()), seconds});
    for (FoundEquilibrium& eq : found) {
      ExperimentRow row;
      row.eps1 = eps1;
      row.eps2 = eps2;
      row.gap = eq.gap;
      for (int i = 0; i < 2; ++i) {
        row.mean_payoffs.push_back(expected_payoff(game.nominal, eq.profile, i));
        row.cvar_payoffs.push_back(-worst_case_cvar(game.f, risk.eps[i], eq.profile, i).value);
      }
      row.profile = std::move(eq.profile);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string experiment_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "eps1,eps2,x1_1,x2_1,payoff1,payoff2,gap\n";
  for (const ExperimentRow& r : report.rows) {
    out << format_number(r.eps1) << ',' << format_number(r.eps2) << ','
        << format_number(r.profile.strategies[0][0]) << ','
        << format_number(r.profile.strategies[1][0]) << ','
        << format_number(r.mean_payoffs[0]) << ',' << format_number(r.mean_payoffs[1]) << ','
        << format_number(r.gap) << '\n';
  }
  return out.str();
}

std::string experiment_json(const ExperimentReport& report) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json doc;
  doc["grid"] = ordered_json::array();
  for (const ExperimentGridPoint& g : report.grid) {
    ordered_json j;
    j["eps1"] = g.eps1;
    j["eps2"] = g.eps2;
    j["num_equilibria"] = g.num_equilibria;
    j["runtime_seconds"] = g.runtime_seconds;
    doc["grid"].push_back(std::move(j));
  }
  doc["equilibria"] = ordered_json::array();
  for (const ExperimentRow& r : report.rows) {
    ordered_json j;
    j["eps1"] = r.eps1;
    j["eps2"] = r.eps2;
    ordered_json profile = ordered_json::array();
    for (const MixedStrategy& s : r.profile.strategies) profile.push_back(s.probs());
    j["profile"] = std::move(profile);
    j["gap"] = r.gap;
    j["mean_payoffs"] = r.mean_payoffs;
    j["cvar_payoffs"] = r.cvar_payoffs;
    doc["equilibria"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace drg
