#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drg/ambiguity.hpp"
#include "drg/game.hpp"
#include "drg/risk.hpp"

namespace drg {

struct BestResponseResult {
  MixedStrategy strategy;
  double value = 0.0;  // rho_i
  WorstCaseCvarResult inner;
};

// One best-response LP per opponent-profile; strategy comes from the LP's
// deterministic vertex choice.
BestResponseResult best_response(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                 int player);

struct GapReport {
  std::vector<double> gaps;              // worst-case CVaR minus best response value
  std::vector<double> current_values;    // worst-case CVaR at x
  std::vector<double> best_values;       // rho_i
  std::vector<MixedStrategy> witnesses;  // best-response strategies
  double total = 0.0;
};

GapReport equilibrium_gap(const AmbiguitySet& f, const RiskProfile& risk,
                          const StrategyProfile& x);

struct VerifyResult {
  bool is_equilibrium = false;
  double tol = 0.0;
  GapReport report;
};

VerifyResult verify_equilibrium(const AmbiguitySet& f, const RiskProfile& risk,
                                const StrategyProfile& x, double tol);

// One evaluated row of the Theorem-2 multilinear system.
struct CertificateRow {
  std::string name;
  bool equality = false;
  double residual = 0.0;  // |lhs| for equalities, positive part for inequalities
};

struct PlayerCertificate {
  double alpha = 0.0, zeta = 0.0, rho = 0.0, gamma = 0.0;
  std::vector<double> beta, lambda, kappa, delta, nu, xi, theta;  // primal side
  std::vector<double> tau, f_vec, phi, g_vec;                     // dual side
};

struct EquilibriumCertificate {
  StrategyProfile profile;
  std::vector<PlayerCertificate> players;
  std::vector<CertificateRow> rows;
  double max_equality_residual = 0.0;
  double max_inequality_violation = 0.0;
  bool valid(double tol = 1e-6) const {
    return max_equality_residual <= tol && max_inequality_violation <= tol;
  }
};

EquilibriumCertificate build_certificate(const AmbiguitySet& f, const RiskProfile& risk,
                                         const StrategyProfile& x);

struct SearchConfig {
  int restarts = 8;
  std::uint64_t seed = 0;
  double gap_tol = 1e-6;
  double dedupe_radius = 1e-3;
  int max_iterations = 60;  // per restart, for each of the two local phases
};

struct FoundEquilibrium {
  StrategyProfile profile;
  double gap = 0.0;
  EquilibriumCertificate certificate;
};

// Multistart search over the product of simplices: random simplex points,
// all pure profiles and the mean-game Nash points seed iterated best
// response followed by a projected pattern search on the total gap.
// Deterministic for a fixed seed; may return an empty list.
std::vector<FoundEquilibrium> find_equilibria(const AmbiguitySet& f, const RiskProfile& risk,
                                              const SearchConfig& config);

enum class ReductionKind { risk_neutral, zero_deviation, singleton_support };

struct NashReduction {
  ReductionKind kind;
  PayoffTensor game;
};

// Propositions 1-3: when every eps_i = 1 or s = 0 the DROE set is the Nash
// set of the mean game; when the support is a single point, of that point.
std::optional<NashReduction> special_case_reduction(const AmbiguitySet& f,
                                                    const RiskProfile& risk);

struct NashEquilibria {
  std::vector<StrategyProfile> profiles;
  bool degenerate = false;
};

// Exhaustive support enumeration for 2-player games with at most 6 actions
// per player. Complete for nondegenerate games.
NashEquilibria nash_support_enumeration(const PayoffTensor& game);

}  // namespace drg
