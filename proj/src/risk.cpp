#include "drg/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "moment_lp.hpp"

namespace drg {

RiskProfile::RiskProfile(std::vector<double> levels) : eps(std::move(levels)) {
  for (double e : eps)
    if (!(e > 0.0 && e <= 1.0))
      throw std::invalid_argument("RiskProfile: risk levels must lie in (0, 1]");
}

double cvar_discrete(std::span<const double> losses, std::span<const double> probs, double eps) {
  if (losses.empty() || losses.size() != probs.size())
    throw std::invalid_argument("cvar_discrete: need a nonempty loss distribution");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("cvar_discrete: eps must lie in (0, 1]");
  double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument("cvar_discrete: probs must sum to 1");

  std::vector<int> order(losses.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return losses[a] > losses[b]; });

  // Average the worst eps of the mass, splitting the atom that straddles the
  // quantile.
  double remaining = eps;
  double acc = 0.0;
  for (int k : order) {
    double take = std::min(remaining, probs[k]);
    acc += take * losses[k];
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return acc / eps;
}

WorstCaseCvarResult worst_case_cvar(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                    int player) {
  x.check_shape(f.shape);
  Matrix y_op = payoff_operator(x, player, f.shape);
  const std::vector<double>& u = x.strategies[player].probs();
  detail::MomentLp m = detail::build_moment_lp(f, eps, y_op, &u);
  lp::LpSolution sol = lp::solve_lp(m.prog);
  if (sol.status != lp::Status::optimal)
    throw std::runtime_error(
        "worst_case_cvar: moment LP not solvable (" + sol.message +
        "); the ambiguity set is inconsistent or unvalidated");
  return detail::extract_primal(m, sol);
}

double worst_case_cvar_lower_bound(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                   int player, std::span<const DiscreteDistribution> candidates) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < candidates.size(); ++c) {
    if (!is_member(candidates[c], f, 1e-9))
      throw std::invalid_argument("worst_case_cvar_lower_bound: candidate " + std::to_string(c) +
                                  " is not a member of the ambiguity set");
    std::vector<double> losses;
    losses.reserve(candidates[c].atoms.size());
    for (const PayoffTensor& atom : candidates[c].atoms)
      losses.push_back(-expected_payoff(atom, x, player));
    best = std::max(best, cvar_discrete(losses, candidates[c].probs, eps));
  }
  return best;
}

}  // namespace drg
