#pragma once

#include <span>
#include <vector>

#include "drg/ambiguity.hpp"
#include "drg/game.hpp"

namespace drg {

// Per-player CVaR risk levels. eps_i = 1 is risk neutral; smaller is more
// risk averse. sigma_i = (1 - eps_i) / eps_i.
struct RiskProfile {
  std::vector<double> eps;

  explicit RiskProfile(std::vector<double> levels);
  double sigma(int player) const { return (1.0 - eps.at(player)) / eps.at(player); }
  bool risk_averse(int player) const { return eps.at(player) < 1.0; }
  int num_players() const { return static_cast<int>(eps.size()); }
};

// CVaR_eps of a finite loss distribution: the expected value of the worst
// eps-tail. Exact via sorting; equals the plain expectation at eps = 1.
double cvar_discrete(std::span<const double> losses, std::span<const double> probs, double eps);

// Optimal variables of the moment-dual CVaR program (appendix LP with the
// strategy fixed). value = zeta + (alpha + m'beta + s gamma) / eps.
struct WorstCaseCvarResult {
  double value = 0.0;
  double zeta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<double> beta, lambda, kappa, delta, nu;  // lambda..nu >= 0
  std::vector<double> xi, theta;                       // <= 0
};

// sup over Q in F of Q-CVaR_eps of player i's loss -pi_i(P; x), computed by
// the moment-duality LP. Requires a validated ambiguity set.
WorstCaseCvarResult worst_case_cvar(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                    int player);

// Brute-force lower bound: best CVaR over explicit member distributions.
// Returns -inf for an empty candidate list; rejects non-members.
double worst_case_cvar_lower_bound(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                   int player, std::span<const DiscreteDistribution> candidates);

}  // namespace drg
