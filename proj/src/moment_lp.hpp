#pragma once

// Shared assembly of the appendix moment-duality LP. With the strategy fixed
// it evaluates the worst-case CVaR; with the strategy free (on the simplex)
// it is the best-response program, whose row duals carry the tau/f/phi/g
// variables of the equilibrium certificate.

#include <vector>

#include "drg/ambiguity.hpp"
#include "drg/game.hpp"
#include "drg/lp.hpp"
#include "drg/risk.hpp"

namespace drg::detail {

struct MomentLp {
  lp::LinearProgram prog;
  int n = 0;        // N prod a_i
  int mw = 0;       // support rows
  int a_i = 0;      // player's action count (only if u free)
  bool free_u = false;

  // variable offsets
  int off_u = -1, off_zeta = 0, off_alpha = 0, off_gamma = 0;
  int off_beta = 0, off_lambda = 0, off_kappa = 0, off_delta = 0, off_nu = 0;
  int off_xi = 0, off_theta = 0;

  // row offsets
  int row_simplex = -1;        // eq: e'u = 1
  int row_e2 = 0, row_e3 = 0;  // eq blocks, n rows each
  int row_u1 = 0, row_u2 = 0;  // ub blocks, n rows each
  int row_u3 = 0, row_u4 = 0;  // scalar ub rows
};

// y_op = Y^i(x^{-i}); when u is fixed, fixed_u holds x^i.
MomentLp build_moment_lp(const AmbiguitySet& f, double eps, const Matrix& y_op,
                         const std::vector<double>* fixed_u);

WorstCaseCvarResult extract_primal(const MomentLp& m, const lp::LpSolution& sol);

// Theorem-2 dual bundle read off the best-response LP (free u only).
struct BestResponseDuals {
  double rho = 0.0;
  std::vector<double> tau, f_vec, phi, g_vec;
};
BestResponseDuals extract_duals(const MomentLp& m, const lp::LpSolution& sol);

}  // namespace drg::detail
