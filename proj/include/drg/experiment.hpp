#pragma once

#include <string>
#include <vector>

#include "drg/equilibrium.hpp"
#include "drg/gamefile.hpp"

namespace drg {

struct ExperimentRow {
  double eps1 = 0.0, eps2 = 0.0;
  StrategyProfile profile;
  double gap = 0.0;
  // Expected payoffs under the mean payoff matrix, per player.
  std::vector<double> mean_payoffs;
  // Negated worst-case CVaR of the loss, per player (risk-adjusted payoff).
  std::vector<double> cvar_payoffs;
};

struct ExperimentGridPoint {
  double eps1 = 0.0, eps2 = 0.0;
  int num_equilibria = 0;
  double runtime_seconds = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<ExperimentGridPoint> grid;
};

// Sweeps (eps1, eps2) over the grid, running the multistart equilibrium
// search at each point. Deterministic for a fixed config.seed.
ExperimentReport run_experiment(const InspectionParams& p,
                                const std::vector<std::pair<double, double>>& eps_grid,
                                const SearchConfig& config);

// Format a double with 9 significant digits (%.9g), the artifact-wide rule.
std::string format_number(double v);

// CSV: header eps1,eps2,x1_1,x2_1,payoff1,payoff2,gap; payoffs are the
// mean-matrix expectations; one row per equilibrium. No timestamps.
std::string experiment_csv(const ExperimentReport& report);

// JSON mirror carrying full profiles and both payoff variants per player.
std::string experiment_json(const ExperimentReport& report);

}  // namespace drg
