#include "drg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drg::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-10;
constexpr double kRatioTol = 1e-7;  // minimum acceptable pivot element
constexpr int kBlandAfter = 5000;
constexpr int kMaxIters = 50000;

struct Substitution {
  // z_j = shift + dir * xhat_{col}  (and - xhat_{split_col} when free)
  double shift = 0.0;
  double dir = 1.0;
  int col = -1;
  int split_col = -1;
};

// Internal standard form: min c'x, A x = b, x >= 0, solved by full-tableau
// primal simplex. The artificial identity block doubles as B^{-1}.
class Tableau {
 public:
  Tableau(Matrix a, std::vector<double> b, int num_rows)
      : nrows_(num_rows), ncols_(a.cols), t_(num_rows, a.cols + num_rows + 1) {
    basis_.resize(nrows_);
    row_dead_.assign(nrows_, false);
    row_flip_.resize(nrows_);
    for (int r = 0; r < nrows_; ++r) {
      double s = (b[r] < 0.0) ? -1.0 : 1.0;
      row_flip_[r] = s;
      for (int c = 0; c < ncols_; ++c) t_(r, c) = s * a(r, c);
      t_(r, ncols_ + r) = 1.0;
      t_(r, ncols_ + nrows_) = s * b[r];
      basis_[r] = ncols_ + r;
    }
    orig_ = t_;  // pristine copy (identity B^{-1} block and flipped b included)
  }

  // Rebuilds the tableau as B^{-1}[A | I | b] from the pristine copy by
  // Gauss-Jordan with partial pivoting, wiping the error accumulated over
  // long pivot sequences. Returns false if the basis matrix is numerically
  // singular (tableau left untouched).
  bool refactor() {
    const int w = ncols_ + nrows_ + 1;
    Matrix m = orig_;
    std::vector<int> done_rows;
    std::vector<char> row_used(nrows_, 0);
    // Eliminate one basis column at a time, choosing the largest available
    // pivot row for it.
    for (int k = 0; k < nrows_; ++k) {
      int col = basis_[k];
      int piv = -1;
      double best = 0.0;
      for (int r = 0; r < nrows_; ++r) {
        if (row_used[r]) continue;
        if (std::abs(m(r, col)) > best) {
          best = std::abs(m(r, col));
          piv = r;
        }
      }
      if (piv < 0 || best < 1e-12) return false;
      row_used[piv] = 1;
      double inv = 1.0 / m(piv, col);
      for (int c = 0; c < w; ++c) m(piv, c) *= inv;
      for (int r = 0; r < nrows_; ++r) {
        if (r == piv) continue;
        double f = m(r, col);
        if (f == 0.0) continue;
        for (int c = 0; c < w; ++c) m(r, c) -= f * m(piv, c);
      }
      done_rows.push_back(piv);
    }
    // Reorder rows so that row r carries basis_[r]'s unit column.
    Matrix out(nrows_, w);
    for (int k = 0; k < nrows_; ++k)
      for (int c = 0; c < w; ++c) out(k, c) = m(done_rows[k], c);
    t_ = std::move(out);
    return true;
  }

  int ncols() const { return ncols_; }
  double rhs(int r) const { return t_(r, ncols_ + nrows_); }
  double binv(int r, int c) const { return t_(r, ncols_ + c); }
  double row_flip(int r) const { return row_flip_[r]; }

  // Minimizes cost'x over the current basis. In phase 1 every artificial
  // basic carries cost 1. Artificial columns never enter.
  Status run(const std::vector<double>& cost, bool phase1, int* iters) {
    std::vector<double> red(ncols_);
    // Columns whose tiny negative reduced cost is rounding noise (no
    // pivotable entry) are retired for the rest of the run; otherwise the
    // zero-then-recompute cycle resurrects them forever.
    std::vector<char> banned(ncols_, 0);
    double cost_scale = 1.0;
    for (double v : cost) cost_scale = std::max(cost_scale, std::abs(v));
    const double noise_tol = 1e-7 * cost_scale;
    auto basic_cost = [&](int b) { return b < ncols_ ? cost[b] : (phase1 ? 1.0 : 0.0); };
    auto recompute_reduced = [&] {
      for (int j = 0; j < ncols_; ++j) {
        if (banned[j]) {
          red[j] = 0.0;
          continue;
        }
        double s = cost[j];
        for (int r = 0; r < nrows_; ++r) {
          double cb = basic_cost(basis_[r]);
          if (cb != 0.0) s -= cb * t_(r, j);
        }
        red[j] = s;
      }
    };
    recompute_reduced();
    int stale = 0;  // pivots since the last full recompute of reduced costs
    int drift = 0;  // pivots since the tableau was last refactored
    // Rank-one tableau updates accumulate error that can fabricate rays or
    // phantom optima after long pivot sequences, so terminal verdicts are only
    // trusted on a tableau freshly rebuilt from the original data.
    auto make_fresh = [&]() -> bool {
      if (!refactor()) return false;
      recompute_reduced();
      stale = 0;
      drift = 0;
      return true;
    };
    for (;; ++*iters) {
      if (*iters > kMaxIters) return Status::numerical_error;
      const bool bland = *iters > kBlandAfter;
      int enter = -1;
      double best = -kPivotTol;
      for (int j = 0; j < ncols_; ++j) {
        if (red[j] < best) {
          enter = j;
          best = red[j];
          if (bland) break;
        }
      }
      if (enter < 0) {
        // Don't conclude optimality from incrementally updated costs.
        if (stale > 0) {
          recompute_reduced();
          stale = 0;
          continue;
        }
        if (drift > 0) {
          if (!make_fresh()) return Status::numerical_error;
          continue;
        }
        return Status::optimal;
      }

      // Ratio test; a zero-valued artificial basic is forced out first so it
      // can never turn positive again. Pivot elements below kRatioTol shred
      // the basis (multipliers ~1/a), so they are ineligible here; if no
      // acceptable row exists the largest sub-threshold entry is used as a
      // last resort before concluding unboundedness.
      int leave = -1;
      double best_ratio = 0.0;
      int fallback = -1;
      double fallback_a = kPivotTol;
      for (int r = 0; r < nrows_; ++r) {
        if (row_dead_[r]) continue;
        double a = t_(r, enter);
        if (!phase1 && basis_[r] >= ncols_ && std::abs(a) > 1e-7 && rhs(r) <= kZeroTol) {
          leave = r;
          break;
        }
        if (a > fallback_a && a <= kRatioTol) {
          fallback = r;
          fallback_a = a;
        }
        if (a <= kRatioTol) continue;
        double ratio = rhs(r) / a;
        if (leave >= 0 && ratio > best_ratio + kZeroTol) continue;
        bool better;
        if (leave < 0 || ratio < best_ratio - kZeroTol) {
          better = true;
        } else if (bland) {
          better = basis_[r] < basis_[leave];  // Bland's anti-cycling tie-break
        } else {
          better = a > t_(leave, enter);  // larger pivot, better conditioning
        }
        if (better) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0 && fallback >= 0) leave = fallback;
      if (leave < 0) {
        if (stale > 0) {
          recompute_reduced();
          stale = 0;
          continue;
        }
        if (drift > 0) {
          if (!make_fresh()) return Status::numerical_error;
          continue;
        }
        if (red[enter] > -noise_tol) {  // rounding noise, not a true ray
          red[enter] = 0.0;
          banned[enter] = 1;
          continue;
        }
        return Status::unbounded;
      }
      double delta = red[enter];
      pivot(leave, enter);
      ++drift;
      for (int j = 0; j < ncols_; ++j) red[j] -= delta * t_(leave, j);
      red[enter] = 0.0;
      if (++stale >= 256) {
        recompute_reduced();
        stale = 0;
      }
      if (drift >= 1024) {
        if (!make_fresh()) return Status::numerical_error;
      }
    }
  }

  // Pivot leftover artificials out of the basis; fully zero rows are
  // redundant constraints and get retired instead.
  void purge_artificials() {
    for (int r = 0; r < nrows_; ++r) {
      if (basis_[r] < ncols_) continue;
      int enter = -1;
      for (int j = 0; j < ncols_; ++j) {
        if (std::abs(t_(r, j)) > 1e-7) {
          enter = j;
          break;
        }
      }
      if (enter >= 0)
        pivot(r, enter);
      else
        row_dead_[r] = true;
    }
  }

  double infeasibility() const {
    double s = 0.0;
    for (int r = 0; r < nrows_; ++r)
      if (basis_[r] >= ncols_) s += rhs(r);
    return s;
  }

  std::vector<double> primal() const {
    std::vector<double> x(ncols_, 0.0);
    for (int r = 0; r < nrows_; ++r)
      if (basis_[r] < ncols_) x[basis_[r]] = rhs(r);
    return x;
  }

  // y = c_B' B^{-1}, one entry per internal row.
  std::vector<double> duals(const std::vector<double>& cost) const {
    std::vector<double> y(nrows_, 0.0);
    for (int i = 0; i < nrows_; ++i) {
      int b = basis_[i];
      if (b >= ncols_ || cost[b] == 0.0) continue;
      for (int r = 0; r < nrows_; ++r) y[r] += cost[b] * binv(i, r);
    }
    return y;
  }

 private:
  void pivot(int leave, int enter) {
    const int total = ncols_ + nrows_ + 1;
    double p = t_(leave, enter);
    for (int j = 0; j < total; ++j) t_(leave, j) /= p;
    t_(leave, enter) = 1.0;
    for (int r = 0; r < nrows_; ++r) {
      if (r == leave) continue;
      double f = t_(r, enter);
      if (std::abs(f) < kZeroTol) continue;
      for (int j = 0; j < total; ++j) t_(r, j) -= f * t_(leave, j);
      t_(r, enter) = 0.0;
    }
    basis_[leave] = enter;
  }

  int nrows_;
  int ncols_;
  Matrix t_;
  Matrix orig_;  // pristine row-flipped [A | I | b] for refactorization
  std::vector<int> basis_;
  std::vector<double> row_flip_;
  std::vector<bool> row_dead_;
};

void validate_program(const LinearProgram& p) {
  const int n = p.num_vars();
  if (n == 0) throw std::invalid_argument("solve_lp: empty program");
  auto check_block = [&](const Matrix& a, const std::vector<double>& b, const char* what) {
    if (a.rows != static_cast<int>(b.size()))
      throw std::invalid_argument(std::string("solve_lp: row count mismatch in ") + what);
    if (a.rows > 0 && a.cols != n)
      throw std::invalid_argument(std::string("solve_lp: column count mismatch in ") + what);
    for (double v : a.data)
      if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite coefficient");
    for (double v : b)
      if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite rhs");
  };
  check_block(p.a_ub, p.b_ub, "a_ub");
  check_block(p.a_eq, p.b_eq, "a_eq");
  if (!p.lower.empty() && static_cast<int>(p.lower.size()) != n)
    throw std::invalid_argument("solve_lp: lower bound size mismatch");
  if (!p.upper.empty() && static_cast<int>(p.upper.size()) != n)
    throw std::invalid_argument("solve_lp: upper bound size mismatch");
  for (double v : p.c)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite objective");
}

}  // namespace

namespace {
LpSolution solve_lp_once(const LinearProgram& p, bool bland_from_start);
}

LpSolution solve_lp(const LinearProgram& p) {
  LpSolution out = solve_lp_once(p, /*bland_from_start=*/false);
  // Dantzig pricing can corrupt a heavily degenerate basis and report a
  // phantom unbounded ray or stall; Bland's rule is slow but immune, so treat
  // those verdicts as tentative and confirm them on a fresh solve.
  if (out.status == Status::unbounded || out.status == Status::numerical_error)
    return solve_lp_once(p, /*bland_from_start=*/true);
  return out;
}

namespace {

LpSolution solve_lp_once(const LinearProgram& p, bool bland_from_start) {
  validate_program(p);
  const int n = p.num_vars();
  const bool maximize = p.sense == Sense::maximize;
  std::vector<double> c(p.c);
  if (maximize)
    for (double& v : c) v = -v;

  std::vector<double> lo(n, -kInf), hi(n, kInf);
  if (!p.lower.empty()) lo = p.lower;
  if (!p.upper.empty()) hi = p.upper;

  LpSolution out;
  for (int j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) {
      out.status = Status::infeasible;
      out.message = "inconsistent bounds on variable " + std::to_string(j);
      return out;
    }
  }

  // Substitute every variable into nonnegative internal form.
  std::vector<Substitution> sub(n);
  int nhat = 0;
  std::vector<std::pair<int, double>> bound_rows;  // (xhat col, upper value)
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lo[j])) {
      sub[j] = {lo[j], 1.0, nhat++, -1};
      if (std::isfinite(hi[j])) bound_rows.emplace_back(sub[j].col, hi[j] - lo[j]);
    } else if (std::isfinite(hi[j])) {
      sub[j] = {hi[j], -1.0, nhat++, -1};
    } else {
      sub[j] = {0.0, 1.0, nhat, nhat + 1};
      nhat += 2;
    }
  }

  const int m_ub = p.a_ub.rows;
  const int m_eq = p.a_eq.rows;
  const int m_bd = static_cast<int>(bound_rows.size());
  const int rows = m_ub + m_eq + m_bd;
  const int n_slack = m_ub + m_bd;
  Matrix a(rows, nhat + n_slack);
  std::vector<double> b(rows, 0.0);

  auto fill_row = [&](int row, const Matrix& src, int src_row, double rhs) {
    double shiftsum = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = src(src_row, j);
      if (v == 0.0) continue;
      a(row, sub[j].col) += v * sub[j].dir;
      if (sub[j].split_col >= 0) a(row, sub[j].split_col) -= v;
      shiftsum += v * sub[j].shift;
    }
    b[row] = rhs - shiftsum;
  };
  int slack = nhat;
  for (int r = 0; r < m_ub; ++r) {
    fill_row(r, p.a_ub, r, p.b_ub[r]);
    a(r, slack++) = 1.0;
  }
  for (int r = 0; r < m_eq; ++r) fill_row(m_ub + r, p.a_eq, r, p.b_eq[r]);
  for (int k = 0; k < m_bd; ++k) {
    int row = m_ub + m_eq + k;
    a(row, bound_rows[k].first) = 1.0;
    b[row] = bound_rows[k].second;
    a(row, slack++) = 1.0;
  }

  std::vector<double> chat(nhat + n_slack, 0.0);
  double cshift = 0.0;
  for (int j = 0; j < n; ++j) {
    chat[sub[j].col] += c[j] * sub[j].dir;
    if (sub[j].split_col >= 0) chat[sub[j].split_col] -= c[j];
    cshift += c[j] * sub[j].shift;
  }

  Tableau tab(std::move(a), std::move(b), rows);
  int iters = bland_from_start ? kBlandAfter + 1 : 0;

  std::vector<double> zero_cost(tab.ncols(), 0.0);
  Status st = tab.run(zero_cost, /*phase1=*/true, &iters);
  // A feasible basis is all phase 1 has to deliver, whatever the exit path.
  if (st != Status::optimal && tab.infeasibility() > 1e-7) {
    out.status = Status::numerical_error;
    out.message = "simplex phase 1 failed";
    return out;
  }
  if (tab.infeasibility() > 1e-7) {
    out.status = Status::infeasible;
    out.message = "constraints are infeasible";
    return out;
  }
  tab.purge_artificials();

  st = tab.run(chat, /*phase1=*/false, &iters);
  if (st == Status::numerical_error) {
    out.status = st;
    out.message = "simplex iteration limit or numerical failure in phase 2";
    return out;
  }
  if (st == Status::unbounded) {
    out.status = Status::unbounded;
    out.message = maximize ? "objective unbounded above" : "objective unbounded below";
    return out;
  }

  std::vector<double> xhat = tab.primal();
  out.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double v = sub[j].shift + sub[j].dir * xhat[sub[j].col];
    if (sub[j].split_col >= 0) v -= xhat[sub[j].split_col];
    out.x[j] = v;
  }
  double obj = cshift + dot(chat, xhat);
  out.objective = maximize ? -obj : obj;

  std::vector<double> y = tab.duals(chat);
  const double dual_sign = maximize ? -1.0 : 1.0;
  out.dual_ub.assign(m_ub, 0.0);
  for (int r = 0; r < m_ub; ++r) out.dual_ub[r] = dual_sign * tab.row_flip(r) * y[r];
  out.dual_eq.assign(m_eq, 0.0);
  for (int r = 0; r < m_eq; ++r) out.dual_eq[r] = dual_sign * tab.row_flip(m_ub + r) * y[m_ub + r];

  out.reduced_costs.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double rc = p.c[j];
    for (int r = 0; r < m_ub; ++r) rc -= p.a_ub(r, j) * out.dual_ub[r];
    for (int r = 0; r < m_eq; ++r) rc -= p.a_eq(r, j) * out.dual_eq[r];
    out.reduced_costs[j] = rc;
  }
  out.status = Status::optimal;
  return out;
}

}  // namespace

bool LpCheck::ok(double scale) const {
  return primal_infeasibility <= 1e-8 * scale && dual_infeasibility <= 1e-8 * scale &&
         complementarity <= 1e-7 * scale && duality_gap <= 1e-7 * scale;
}

LpCheck check_solution(const LinearProgram& p, const LpSolution& s) {
  if (s.status != Status::optimal) throw std::invalid_argument("check_solution: not optimal");
  if (p.sense == Sense::maximize) {
    LinearProgram q = p;
    q.sense = Sense::minimize;
    for (double& v : q.c) v = -v;
    LpSolution t = s;
    t.objective = -s.objective;
    for (double& v : t.dual_ub) v = -v;
    for (double& v : t.dual_eq) v = -v;
    for (double& v : t.reduced_costs) v = -v;
    return check_solution(q, t);
  }

  const int n = p.num_vars();
  LpCheck chk;
  std::vector<double> lo(n, -kInf), hi(n, kInf);
  if (!p.lower.empty()) lo = p.lower;
  if (!p.upper.empty()) hi = p.upper;

  auto bump = [](double& target, double v) { target = std::max(target, v); };

  std::vector<double> slack_ub(p.a_ub.rows, 0.0);
  for (int r = 0; r < p.a_ub.rows; ++r) {
    double ax = dot(p.a_ub.row(r), s.x);
    slack_ub[r] = p.b_ub[r] - ax;
    bump(chk.primal_infeasibility, (ax - p.b_ub[r]) / (1.0 + std::abs(p.b_ub[r])));
  }
  for (int r = 0; r < p.a_eq.rows; ++r) {
    double ax = dot(p.a_eq.row(r), s.x);
    bump(chk.primal_infeasibility, std::abs(ax - p.b_eq[r]) / (1.0 + std::abs(p.b_eq[r])));
  }
  for (int j = 0; j < n; ++j) {
    bump(chk.primal_infeasibility, lo[j] - s.x[j]);
    bump(chk.primal_infeasibility, s.x[j] - hi[j]);
  }

  // Minimization conventions: inequality duals nonpositive; the reduced cost
  // sign must match the active bound.
  double bound_terms = 0.0;
  for (int r = 0; r < p.a_ub.rows; ++r) {
    bump(chk.dual_infeasibility, s.dual_ub[r]);
    bump(chk.complementarity, std::abs(s.dual_ub[r] * slack_ub[r]) / (1.0 + std::abs(s.dual_ub[r])));
  }
  for (int j = 0; j < n; ++j) {
    double rc = s.reduced_costs[j];
    if (rc > 0.0) {
      if (!std::isfinite(lo[j]))
        bump(chk.dual_infeasibility, rc);
      else {
        bound_terms += rc * lo[j];
        bump(chk.complementarity, std::abs(rc * (s.x[j] - lo[j])) / (1.0 + std::abs(rc)));
      }
    } else if (rc < 0.0) {
      if (!std::isfinite(hi[j]))
        bump(chk.dual_infeasibility, -rc);
      else {
        bound_terms += rc * hi[j];
        bump(chk.complementarity, std::abs(rc * (hi[j] - s.x[j])) / (1.0 + std::abs(rc)));
      }
    }
  }
  double dual_obj = dot(s.dual_ub, p.b_ub) + dot(s.dual_eq, p.b_eq) + bound_terms;
  chk.duality_gap = std::abs(s.objective - dual_obj) / (1.0 + std::abs(s.objective));
  return chk;
}

}  // namespace drg::lp
