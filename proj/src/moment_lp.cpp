#include "moment_lp.hpp"

#include <stdexcept>

namespace drg::detail {

MomentLp build_moment_lp(const AmbiguitySet& f, double eps, const Matrix& y_op,
                         const std::vector<double>* fixed_u) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("moment LP: risk level must lie in (0, 1]");

  MomentLp m;
  m.n = f.support.dim();
  m.mw = f.support.num_rows();
  m.a_i = y_op.cols;
  m.free_u = fixed_u == nullptr;

  const int n = m.n, mw = m.mw;
  int nv = 0;
  if (m.free_u) {
    m.off_u = nv;
    nv += m.a_i;
  }
  m.off_zeta = nv++;
  m.off_alpha = nv++;
  m.off_gamma = nv++;
  m.off_beta = nv;
  nv += n;
  m.off_lambda = nv;
  nv += n;
  m.off_kappa = nv;
  nv += n;
  m.off_delta = nv;
  nv += n;
  m.off_nu = nv;
  nv += n;
  m.off_xi = nv;
  nv += mw;
  m.off_theta = nv;
  nv += mw;

  lp::LinearProgram& p = m.prog;
  p.sense = lp::Sense::minimize;
  p.c.assign(nv, 0.0);
  p.c[m.off_zeta] = 1.0;
  p.c[m.off_alpha] = 1.0 / eps;
  p.c[m.off_gamma] = f.mad_cap / eps;
  for (int j = 0; j < n; ++j) p.c[m.off_beta + j] = f.mean[j] / eps;

  p.lower.assign(nv, -lp::kInf);
  p.upper.assign(nv, lp::kInf);
  if (m.free_u)
    for (int a = 0; a < m.a_i; ++a) p.lower[m.off_u + a] = 0.0;
  p.lower[m.off_gamma] = 0.0;
  for (int j = 0; j < n; ++j) {
    p.lower[m.off_lambda + j] = 0.0;
    p.lower[m.off_kappa + j] = 0.0;
    p.lower[m.off_delta + j] = 0.0;
    p.lower[m.off_nu + j] = 0.0;
  }
  for (int r = 0; r < mw; ++r) {
    p.upper[m.off_xi + r] = 0.0;
    p.upper[m.off_theta + r] = 0.0;
  }

  // Y^i(x^{-i}) u, fixed or symbolic.
  std::vector<double> q(n, 0.0);
  if (!m.free_u) {
    if (static_cast<int>(fixed_u->size()) != m.a_i)
      throw std::invalid_argument("moment LP: fixed strategy length mismatch");
    q = matvec(y_op, *fixed_u);
  }

  const int n_eq = (m.free_u ? 1 : 0) + 2 * n;
  const int n_ub = 2 * n + 2;
  p.a_eq = Matrix(n_eq, nv);
  p.b_eq.assign(n_eq, 0.0);
  p.a_ub = Matrix(n_ub, nv);
  p.b_ub.assign(n_ub, 0.0);

  int eq = 0;
  if (m.free_u) {
    m.row_simplex = eq;
    for (int a = 0; a < m.a_i; ++a) p.a_eq(eq, m.off_u + a) = 1.0;
    p.b_eq[eq] = 1.0;
    ++eq;
  }
  // E2: -lambda + kappa + W'xi - beta = 0
  m.row_e2 = eq;
  for (int j = 0; j < n; ++j, ++eq) {
    p.a_eq(eq, m.off_lambda + j) = -1.0;
    p.a_eq(eq, m.off_kappa + j) = 1.0;
    p.a_eq(eq, m.off_beta + j) = -1.0;
    for (int r = 0; r < mw; ++r) p.a_eq(eq, m.off_xi + r) = f.support.w(r, j);
  }
  // E3: -delta + nu + W'theta - beta - Y u = 0   (Y u on the rhs if fixed)
  m.row_e3 = eq;
  for (int j = 0; j < n; ++j, ++eq) {
    p.a_eq(eq, m.off_delta + j) = -1.0;
    p.a_eq(eq, m.off_nu + j) = 1.0;
    p.a_eq(eq, m.off_beta + j) = -1.0;
    for (int r = 0; r < mw; ++r) p.a_eq(eq, m.off_theta + r) = f.support.w(r, j);
    if (m.free_u) {
      for (int a = 0; a < m.a_i; ++a) p.a_eq(eq, m.off_u + a) = -y_op(j, a);
    } else {
      p.b_eq[eq] = q[j];
    }
  }

  int ub = 0;
  // U1: lambda + kappa - gamma e <= 0
  m.row_u1 = ub;
  for (int j = 0; j < n; ++j, ++ub) {
    p.a_ub(ub, m.off_lambda + j) = 1.0;
    p.a_ub(ub, m.off_kappa + j) = 1.0;
    p.a_ub(ub, m.off_gamma) = -1.0;
  }
  // U2: delta + nu - gamma e <= 0
  m.row_u2 = ub;
  for (int j = 0; j < n; ++j, ++ub) {
    p.a_ub(ub, m.off_delta + j) = 1.0;
    p.a_ub(ub, m.off_nu + j) = 1.0;
    p.a_ub(ub, m.off_gamma) = -1.0;
  }
  // U3: -(alpha - m'lambda + m'kappa + h'xi) <= 0
  m.row_u3 = ub;
  p.a_ub(ub, m.off_alpha) = -1.0;
  for (int j = 0; j < n; ++j) {
    p.a_ub(ub, m.off_lambda + j) = f.mean[j];
    p.a_ub(ub, m.off_kappa + j) = -f.mean[j];
  }
  for (int r = 0; r < mw; ++r) p.a_ub(ub, m.off_xi + r) = -f.support.h[r];
  ++ub;
  // U4: -(alpha - m'delta + m'nu + h'theta + zeta) <= 0
  m.row_u4 = ub;
  p.a_ub(ub, m.off_alpha) = -1.0;
  p.a_ub(ub, m.off_zeta) = -1.0;
  for (int j = 0; j < n; ++j) {
    p.a_ub(ub, m.off_delta + j) = f.mean[j];
    p.a_ub(ub, m.off_nu + j) = -f.mean[j];
  }
  for (int r = 0; r < mw; ++r) p.a_ub(ub, m.off_theta + r) = -f.support.h[r];

  return m;
}

WorstCaseCvarResult extract_primal(const MomentLp& m, const lp::LpSolution& sol) {
  WorstCaseCvarResult r;
  r.value = sol.objective;
  r.zeta = sol.x[m.off_zeta];
  r.alpha = sol.x[m.off_alpha];
  r.gamma = sol.x[m.off_gamma];
  auto slice = [&](int off, int len) {
    return std::vector<double>(sol.x.begin() + off, sol.x.begin() + off + len);
  };
  r.beta = slice(m.off_beta, m.n);
  r.lambda = slice(m.off_lambda, m.n);
  r.kappa = slice(m.off_kappa, m.n);
  r.delta = slice(m.off_delta, m.n);
  r.nu = slice(m.off_nu, m.n);
  r.xi = slice(m.off_xi, m.mw);
  r.theta = slice(m.off_theta, m.mw);
  return r;
}

BestResponseDuals extract_duals(const MomentLp& m, const lp::LpSolution& sol) {
  if (!m.free_u) throw std::logic_error("extract_duals: strategy was fixed");
  BestResponseDuals d;
  d.rho = sol.dual_eq[m.row_simplex];
  d.tau.assign(sol.dual_eq.begin() + m.row_e2, sol.dual_eq.begin() + m.row_e2 + m.n);
  d.f_vec.assign(sol.dual_eq.begin() + m.row_e3, sol.dual_eq.begin() + m.row_e3 + m.n);
  d.phi.assign(sol.dual_ub.begin() + m.row_u1, sol.dual_ub.begin() + m.row_u1 + m.n);
  d.g_vec.assign(sol.dual_ub.begin() + m.row_u2, sol.dual_ub.begin() + m.row_u2 + m.n);
  return d;
}

}  // namespace drg::detail
