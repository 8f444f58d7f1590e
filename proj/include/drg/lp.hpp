#pragma once

#include <limits>
#include <string>
#include <vector>

#include "drg/matrix.hpp"

namespace drg::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Status { optimal, infeasible, unbounded, numerical_error };

// min/max c'z  s.t.  a_ub z <= b_ub,  a_eq z = b_eq,  lower <= z <= upper.
// Empty blocks are allowed; bounds default to free when left empty.
struct LinearProgram {
  Sense sense = Sense::minimize;
  std::vector<double> c;
  Matrix a_ub;
  std::vector<double> b_ub;
  Matrix a_eq;
  std::vector<double> b_eq;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed

  int num_vars() const { return static_cast<int>(c.size()); }
};

// Dual values are shadow prices dObj/dRhs of the row as written. For a
// minimization, inequality duals are <= 0 and equality duals are free.
// reduced_costs[j] = c_j - (a_ub' dual_ub + a_eq' dual_eq)_j; it plays the
// role of the multiplier on variable j's active bound.
struct LpSolution {
  Status status = Status::numerical_error;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> dual_ub;
  std::vector<double> dual_eq;
  std::vector<double> reduced_costs;
  std::string message;
};

// Dense two-phase primal simplex, Dantzig pricing with a Bland fallback
// against cycling. Deterministic for a fixed input.
LpSolution solve_lp(const LinearProgram& p);

// Residual diagnostics for an optimal solution: primal/dual feasibility,
// complementary slackness and the duality gap. Throws on dimension mismatch.
struct LpCheck {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double duality_gap = 0.0;
  bool ok(double scale = 1.0) const;
};
LpCheck check_solution(const LinearProgram& p, const LpSolution& s);

}  // namespace drg::lp
