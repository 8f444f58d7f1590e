#include "drg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "moment_lp.hpp"

namespace drg {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

std::vector<double> stack(const StrategyProfile& x) {
  std::vector<double> out;
  for (const MixedStrategy& s : x.strategies)
    out.insert(out.end(), s.probs().begin(), s.probs().end());
  return out;
}

double profile_distance(const StrategyProfile& a, const StrategyProfile& b) {
  std::vector<double> va = stack(a), vb = stack(b);
  double d = 0.0;
  for (size_t i = 0; i < va.size(); ++i) d = std::max(d, std::abs(va[i] - vb[i]));
  return d;
}

MixedStrategy clean_strategy(std::vector<double> p) {
  double sum = 0.0;
  for (double& v : p) {
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return MixedStrategy(std::move(p));
}

}  // namespace

BestResponseResult best_response(const AmbiguitySet& f, double eps, const StrategyProfile& x,
                                 int player) {
  Matrix y_op = payoff_operator(x, player, f.shape);
  detail::MomentLp m = detail::build_moment_lp(f, eps, y_op, nullptr);
  lp::LpSolution sol = lp::solve_lp(m.prog);
  if (sol.status != lp::Status::optimal)
    throw std::runtime_error("best_response: LP failed (" + sol.message + ")");
  std::vector<double> u(sol.x.begin() + m.off_u, sol.x.begin() + m.off_u + m.a_i);
  return {clean_strategy(std::move(u)), sol.objective, detail::extract_primal(m, sol)};
}

GapReport equilibrium_gap(const AmbiguitySet& f, const RiskProfile& risk,
                          const StrategyProfile& x) {
  x.check_shape(f.shape);
  if (risk.num_players() != f.shape.num_players)
    throw std::invalid_argument("equilibrium_gap: risk profile size mismatch");
  GapReport rep;
  for (int i = 0; i < f.shape.num_players; ++i) {
    WorstCaseCvarResult wc = worst_case_cvar(f, risk.eps[i], x, i);
    BestResponseResult br = best_response(f, risk.eps[i], x, i);
    rep.current_values.push_back(wc.value);
    rep.best_values.push_back(br.value);
    rep.gaps.push_back(wc.value - br.value);
    rep.witnesses.push_back(br.strategy);
    rep.total += wc.value - br.value;
  }
  return rep;
}

VerifyResult verify_equilibrium(const AmbiguitySet& f, const RiskProfile& risk,
                                const StrategyProfile& x, double tol) {
  VerifyResult out;
  out.tol = tol;
  out.report = equilibrium_gap(f, risk, x);
  out.is_equilibrium = out.report.total <= tol;
  return out;
}

EquilibriumCertificate build_certificate(const AmbiguitySet& f, const RiskProfile& risk,
                                         const StrategyProfile& x) {
  x.check_shape(f.shape);
  const int n = f.support.dim();
  const int mw = f.support.num_rows();
  const std::vector<double>& m = f.mean;
  const std::vector<double>& h = f.support.h;
  const double s = f.mad_cap;

  EquilibriumCertificate cert;
  cert.profile = x;

  auto add_eq = [&](std::string name, double residual) {
    cert.rows.push_back({std::move(name), true, std::abs(residual)});
    cert.max_equality_residual = std::max(cert.max_equality_residual, std::abs(residual));
  };
  // lhs of a "<= 0" row
  auto add_le = [&](std::string name, double lhs) {
    cert.rows.push_back({std::move(name), false, positive_part(lhs)});
    cert.max_inequality_violation =
        std::max(cert.max_inequality_violation, positive_part(lhs));
  };
  auto max_abs = [](const std::vector<double>& v) {
    double r = 0.0;
    for (double e : v) r = std::max(r, std::abs(e));
    return r;
  };
  auto max_val = [](const std::vector<double>& v) {
    double r = -lp::kInf;
    for (double e : v) r = std::max(r, e);
    return r;
  };

  for (int i = 0; i < f.shape.num_players; ++i) {
    const double eps = risk.eps[i];
    const double sigma = risk.sigma(i);
    const std::vector<double>& xi_probs = x.strategies[i].probs();
    Matrix y_op = payoff_operator(x, i, f.shape);
    std::vector<double> yx = matvec(y_op, xi_probs);

    // Primal block: the moment LP with the player's strategy held at x^i.
    WorstCaseCvarResult prim = worst_case_cvar(f, eps, x, i);
    // Dual block: row duals of the best-response LP.
    Matrix y_free = y_op;
    detail::MomentLp mlp = detail::build_moment_lp(f, eps, y_free, nullptr);
    lp::LpSolution brsol = lp::solve_lp(mlp.prog);
    if (brsol.status != lp::Status::optimal)
      throw std::runtime_error("build_certificate: best-response LP failed");
    detail::BestResponseDuals dual = detail::extract_duals(mlp, brsol);

    PlayerCertificate pc;
    pc.alpha = prim.alpha;
    pc.zeta = prim.zeta;
    pc.gamma = prim.gamma;
    pc.rho = dual.rho;
    pc.beta = prim.beta;
    pc.lambda = prim.lambda;
    pc.kappa = prim.kappa;
    pc.delta = prim.delta;
    pc.nu = prim.nu;
    pc.xi = prim.xi;
    pc.theta = prim.theta;
    pc.tau = dual.tau;
    pc.f_vec = dual.f_vec;
    pc.phi = dual.phi;
    pc.g_vec = dual.g_vec;

    const std::string p = "p" + std::to_string(i) + "/";

    // Optimality link: the fixed-strategy objective must meet the
    // best-response value. This is the row a non-equilibrium violates.
    add_eq(p + "value_link",
           prim.zeta + (prim.alpha + dot(m, prim.beta) + s * prim.gamma) / eps - pc.rho);
    double xsum = -1.0;
    for (double v : xi_probs) xsum += v;
    add_eq(p + "simplex", xsum);

    // Primal feasibility rows of the appendix program.
    std::vector<double> wt_xi = matvec_t(f.support.w, pc.xi);
    std::vector<double> e2(n), e3(n), u1(n), u2(n);
    std::vector<double> wt_theta = matvec_t(f.support.w, pc.theta);
    for (int j = 0; j < n; ++j) {
      e2[j] = -pc.lambda[j] + pc.kappa[j] + wt_xi[j] - pc.beta[j];
      e3[j] = -pc.delta[j] + pc.nu[j] + wt_theta[j] - pc.beta[j] - yx[j];
      u1[j] = pc.lambda[j] + pc.kappa[j] - pc.gamma;
      u2[j] = pc.delta[j] + pc.nu[j] - pc.gamma;
    }
    add_eq(p + "stationarity_plain", max_abs(e2));
    add_eq(p + "stationarity_loss", max_abs(e3));
    add_le(p + "deviation_bound_plain", max_val(u1));
    add_le(p + "deviation_bound_loss", max_val(u2));
    add_le(p + "nonneg_plain", -(pc.alpha - dot(m, pc.lambda) + dot(m, pc.kappa) + dot(h, pc.xi)));
    add_le(p + "nonneg_loss",
           -(pc.alpha - dot(m, pc.delta) + dot(m, pc.nu) + dot(h, pc.theta) + pc.zeta));

    // Dual-side rows.
    std::vector<double> ytf = matvec_t(y_op, pc.f_vec);
    double rho_row = -lp::kInf;
    for (double v : ytf) rho_row = std::max(rho_row, pc.rho - v);
    add_le(p + "best_response_support", rho_row);

    double e_g = 0.0, e_phi = 0.0;
    for (int j = 0; j < n; ++j) {
      e_g += pc.g_vec[j];
      e_phi += pc.phi[j];
    }
    add_le(p + "mad_budget", -e_g - e_phi - s / eps);

    std::vector<double> mean_link(n), d1(n), d2(n), d3(n), d4(n);
    for (int j = 0; j < n; ++j) {
      mean_link[j] = -pc.tau[j] - pc.f_vec[j] - m[j] / eps;
      d1[j] = -pc.tau[j] + pc.phi[j] - sigma * m[j];
      d2[j] = pc.tau[j] + pc.phi[j] + sigma * m[j];
      d3[j] = -pc.f_vec[j] + pc.g_vec[j] - m[j];
      d4[j] = pc.f_vec[j] + pc.g_vec[j] + m[j];
    }
    add_eq(p + "dual_mean_link", max_abs(mean_link));
    add_le(p + "dual_dev_plain_lo", max_val(d1));
    add_le(p + "dual_dev_plain_hi", max_val(d2));
    add_le(p + "dual_dev_loss_lo", max_val(d3));
    add_le(p + "dual_dev_loss_hi", max_val(d4));

    std::vector<double> w_tau = matvec(f.support.w, pc.tau);
    std::vector<double> w_f = matvec(f.support.w, pc.f_vec);
    double tau_row = -lp::kInf, f_row = -lp::kInf;
    for (int r = 0; r < mw; ++r) {
      tau_row = std::max(tau_row, -(w_tau[r] + sigma * h[r]));
      f_row = std::max(f_row, -(w_f[r] + h[r]));
    }
    add_le(p + "dual_support_plain", tau_row);
    add_le(p + "dual_support_loss", f_row);

    // Sign constraints.
    double sign_viol = positive_part(-pc.gamma);
    for (int j = 0; j < n; ++j) {
      sign_viol = std::max({sign_viol, -pc.lambda[j], -pc.kappa[j], -pc.delta[j], -pc.nu[j],
                            pc.phi[j], pc.g_vec[j]});
    }
    for (double v : xi_probs) sign_viol = std::max(sign_viol, -v);
    for (int r = 0; r < mw; ++r) sign_viol = std::max({sign_viol, pc.xi[r], pc.theta[r]});
    add_le(p + "signs", sign_viol);

    cert.players.push_back(std::move(pc));
  }
  return cert;
}

std::optional<NashReduction> special_case_reduction(const AmbiguitySet& f,
                                                    const RiskProfile& risk) {
  bool all_neutral = true;
  for (double e : risk.eps)
    if (e < 1.0) all_neutral = false;
  if (all_neutral)
    return NashReduction{ReductionKind::risk_neutral, PayoffTensor(f.shape, f.mean)};
  if (f.mad_cap == 0.0)
    return NashReduction{ReductionKind::zero_deviation, PayoffTensor(f.shape, f.mean)};
  if (auto cb = coordinate_bounds(f.support)) {
    bool singleton = true;
    std::vector<double> point(cb->lo.size());
    for (size_t j = 0; j < cb->lo.size(); ++j) {
      if (cb->hi[j] - cb->lo[j] > 1e-9) {
        singleton = false;
        break;
      }
      point[j] = 0.5 * (cb->lo[j] + cb->hi[j]);
    }
    if (singleton)
      return NashReduction{ReductionKind::singleton_support, PayoffTensor(f.shape, point)};
  }
  return std::nullopt;
}

namespace {

// Solve the square system M z = rhs; returns false when singular.
bool gauss_solve(Matrix m, std::vector<double> rhs, std::vector<double>* out) {
  const int k = m.rows;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < 1e-11) return false;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(m(piv, c), m(col, c));
      std::swap(rhs[piv], rhs[col]);
    }
    for (int r = col + 1; r < k; ++r) {
      double f = m(r, col) / m(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c) m(r, c) -= f * m(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  out->assign(k, 0.0);
  for (int r = k - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < k; ++c) s -= m(r, c) * (*out)[c];
    (*out)[r] = s / m(r, r);
  }
  return true;
}

void enumerate_subsets(int universe, int size, std::vector<std::vector<int>>* out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == size) {
      out->push_back(cur);
      return;
    }
    for (int v = start; v < universe; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

NashEquilibria nash_support_enumeration(const PayoffTensor& game) {
  const GameShape& shape = game.shape();
  if (shape.num_players != 2)
    throw std::invalid_argument("nash_support_enumeration: 2-player games only");
  const int a1 = shape.action_counts[0], a2 = shape.action_counts[1];
  if (a1 > 6 || a2 > 6)
    throw std::invalid_argument("nash_support_enumeration: action counts above 6 unsupported");

  Matrix a(a1, a2), b(a1, a2);
  for (int i = 0; i < a1; ++i)
    for (int j = 0; j < a2; ++j) {
      std::vector<int> act = {i, j};
      a(i, j) = game.entry(0, act);
      b(i, j) = game.entry(1, act);
    }

  constexpr double kTol = 1e-9;
  NashEquilibria out;

  for (int k = 1; k <= std::min(a1, a2); ++k) {
    std::vector<std::vector<int>> supports1, supports2;
    enumerate_subsets(a1, k, &supports1);
    enumerate_subsets(a2, k, &supports2);
    for (const auto& si : supports1) {
      for (const auto& sj : supports2) {
        // Indifference system for player 2's mixture y over sj and value v1.
        Matrix m1(k + 1, k + 1);
        std::vector<double> r1(k + 1, 0.0);
        for (int row = 0; row < k; ++row) {
          for (int col = 0; col < k; ++col) m1(row, col) = a(si[row], sj[col]);
          m1(row, k) = -1.0;
        }
        for (int col = 0; col < k; ++col) m1(k, col) = 1.0;
        r1[k] = 1.0;
        std::vector<double> sol1;
        if (!gauss_solve(std::move(m1), std::move(r1), &sol1)) continue;

        Matrix m2(k + 1, k + 1);
        std::vector<double> r2(k + 1, 0.0);
        for (int row = 0; row < k; ++row) {
          for (int col = 0; col < k; ++col) m2(row, col) = b(si[col], sj[row]);
          m2(row, k) = -1.0;
        }
        for (int col = 0; col < k; ++col) m2(k, col) = 1.0;
        r2[k] = 1.0;
        std::vector<double> sol2;
        if (!gauss_solve(std::move(m2), std::move(r2), &sol2)) continue;

        double v1 = sol1[k], v2 = sol2[k];
        bool ok = true;
        for (int c = 0; c < k && ok; ++c)
          if (sol1[c] < kTol || sol2[c] < kTol) ok = false;  // smaller support finds it
        if (!ok) continue;

        std::vector<double> x(a1, 0.0), y(a2, 0.0);
        for (int c = 0; c < k; ++c) {
          y[sj[c]] = sol1[c];
          x[si[c]] = sol2[c];
        }
        // Best-response inequalities off support.
        for (int i = 0; i < a1 && ok; ++i) {
          if (std::find(si.begin(), si.end(), i) != si.end()) continue;
          double val = 0.0;
          for (int j = 0; j < a2; ++j) val += a(i, j) * y[j];
          if (val > v1 + kTol) ok = false;
          else if (val > v1 - kTol) out.degenerate = true;
        }
        for (int j = 0; j < a2 && ok; ++j) {
          if (std::find(sj.begin(), sj.end(), j) != sj.end()) continue;
          double val = 0.0;
          for (int i = 0; i < a1; ++i) val += b(i, j) * x[i];
          if (val > v2 + kTol) ok = false;
          else if (val > v2 - kTol) out.degenerate = true;
        }
        if (!ok) continue;

        StrategyProfile prof{{clean_strategy(x), clean_strategy(y)}};
        bool dup = false;
        for (const StrategyProfile& seen : out.profiles)
          if (profile_distance(seen, prof) < 1e-8) dup = true;
        if (!dup) out.profiles.push_back(std::move(prof));
      }
    }
  }
  return out;
}

namespace {

StrategyProfile random_profile(const GameShape& shape, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<MixedStrategy> strategies;
  for (int i = 0; i < shape.num_players; ++i) {
    std::vector<double> p(shape.action_counts[i]);
    double sum = 0.0;
    for (double& v : p) {
      v = expo(rng) + 1e-12;
      sum += v;
    }
    for (double& v : p) v /= sum;
    strategies.push_back(MixedStrategy(std::move(p)));
  }
  return {std::move(strategies)};
}

void all_pure_profiles(const GameShape& shape, std::vector<StrategyProfile>* out) {
  if (shape.joint_actions() > 64) return;
  std::vector<int> digits(shape.num_players, 0);
  for (;;) {
    std::vector<MixedStrategy> strategies;
    for (int i = 0; i < shape.num_players; ++i)
      strategies.push_back(MixedStrategy::pure(shape.action_counts[i], digits[i]));
    out->push_back({std::move(strategies)});
    int k = shape.num_players - 1;
    for (; k >= 0; --k) {
      if (++digits[k] < shape.action_counts[k]) break;
      digits[k] = 0;
    }
    if (k < 0) break;
  }
}

// Damped best-response dynamics followed by a projected pattern search on
// the total gap. Returns the final profile and its gap.
std::pair<StrategyProfile, double> refine(const AmbiguitySet& f, const RiskProfile& risk,
                                          StrategyProfile x, const SearchConfig& cfg) {
  GapReport rep = equilibrium_gap(f, risk, x);
  double gap = rep.total;

  for (int t = 0; t < cfg.max_iterations && gap > cfg.gap_tol; ++t) {
    double w = 1.0 / (t + 2.0);
    std::vector<MixedStrategy> next;
    for (int i = 0; i < f.shape.num_players; ++i) {
      std::vector<double> p(x.strategies[i].probs());
      for (size_t a = 0; a < p.size(); ++a)
        p[a] = (1.0 - w) * p[a] + w * rep.witnesses[i][static_cast<int>(a)];
      next.push_back(clean_strategy(std::move(p)));
    }
    StrategyProfile cand{std::move(next)};
    GapReport crep = equilibrium_gap(f, risk, cand);
    if (crep.total < gap) {
      x = std::move(cand);
      rep = std::move(crep);
      gap = rep.total;
    }
  }

  double step = 0.25;
  for (int sweep = 0; sweep < cfg.max_iterations && gap > cfg.gap_tol && step > 1e-9; ++sweep) {
    bool improved = false;
    for (int i = 0; i < f.shape.num_players; ++i) {
      const int ai = f.shape.action_counts[i];
      for (int to = 0; to < ai; ++to) {
        for (int from = 0; from < ai; ++from) {
          if (from == to) continue;
          double d = std::min(step, x.strategies[i][from]);
          if (d <= 1e-15) continue;
          std::vector<double> p(x.strategies[i].probs());
          p[from] -= d;
          p[to] += d;
          StrategyProfile cand = x;
          cand.strategies[i] = clean_strategy(std::move(p));
          double cgap = equilibrium_gap(f, risk, cand).total;
          if (cgap < gap - 1e-15) {
            x = std::move(cand);
            gap = cgap;
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.35;
  }
  return {std::move(x), gap};
}

}  // namespace

std::vector<FoundEquilibrium> find_equilibria(const AmbiguitySet& f, const RiskProfile& risk,
                                              const SearchConfig& config) {
  if (config.restarts < 1 || config.gap_tol <= 0.0 || config.dedupe_radius <= 0.0)
    throw std::invalid_argument("find_equilibria: bad search configuration");

  std::vector<StrategyProfile> seeds;
  // Nash points of the mean game anchor the search.
  if (f.shape.num_players == 2 &&
      *std::max_element(f.shape.action_counts.begin(), f.shape.action_counts.end()) <= 6) {
    NashEquilibria mean_nash = nash_support_enumeration(PayoffTensor(f.shape, f.mean));
    for (StrategyProfile& p : mean_nash.profiles) seeds.push_back(std::move(p));
  }
  all_pure_profiles(f.shape, &seeds);
  std::mt19937_64 rng(config.seed);
  for (int r = 0; r < config.restarts; ++r) seeds.push_back(random_profile(f.shape, rng));

  struct Candidate {
    StrategyProfile profile;
    double gap;
  };
  std::vector<Candidate> accepted;
  for (StrategyProfile& seed : seeds) {
    auto [prof, gap] = refine(f, risk, std::move(seed), config);
    if (gap <= config.gap_tol) accepted.push_back({std::move(prof), gap});
  }

  // Keep the lowest-gap representative of each cluster, then order
  // canonically so parallel restart execution would not change the output.
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.gap < b.gap; });
  std::vector<Candidate> kept;
  for (Candidate& c : accepted) {
    bool dup = false;
    for (const Candidate& k : kept)
      if (profile_distance(k.profile, c.profile) <= config.dedupe_radius) dup = true;
    if (!dup) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    return stack(a.profile) < stack(b.profile);
  });

  std::vector<FoundEquilibrium> out;
  for (Candidate& c : kept) {
    EquilibriumCertificate cert = build_certificate(f, risk, c.profile);
    out.push_back({std::move(c.profile), c.gap, std::move(cert)});
  }
  return out;
}

}  // namespace drg
