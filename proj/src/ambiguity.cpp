#include "drg/ambiguity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drg/lp.hpp"

namespace drg {

namespace {

// Solve the k x k system M x = rhs by Gaussian elimination with partial
// pivoting. Throws when M is singular.
std::vector<double> solve_dense(Matrix m, std::vector<double> rhs) {
  const int k = m.rows;
  if (m.cols != k || static_cast<int>(rhs.size()) != k)
    throw std::invalid_argument("solve_dense: dimension mismatch");
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < 1e-12) throw std::runtime_error("solve_dense: singular matrix");
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
  std::vector<double> x(k, 0.0);
  for (int r = k - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < k; ++c) s -= m(r, c) * x[c];
    x[r] = s / m(r, r);
  }
  return x;
}

// Moore-Penrose pseudoinverse (A'A)^{-1} A' for full-column-rank A.
Matrix pseudoinverse(const Matrix& a) {
  const int n = a.rows, k = a.cols;
  Matrix ata(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) s += a(r, i) * a(r, j);
      ata(i, j) = s;
    }
  Matrix pinv(k, n);
  for (int col = 0; col < n; ++col) {
    std::vector<double> rhs(k, 0.0);
    for (int i = 0; i < k; ++i) rhs[i] = a(col, i);
    std::vector<double> x;
    try {
      x = solve_dense(ata, rhs);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument(
          "build_support_from_box: affine map must have full column rank");
    }
    for (int i = 0; i < k; ++i) pinv(i, col) = x[i];
  }
  return pinv;
}

}  // namespace

bool ValidationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  return os.str();
}

PolyhedralSupport build_support_from_box(const AffineBoxUncertainty& u) {
  const int k = u.map.cols;
  const int n = u.map.rows;
  if (static_cast<int>(u.lo.size()) != k || static_cast<int>(u.hi.size()) != k)
    throw std::invalid_argument("build_support_from_box: interval count mismatch");
  if (static_cast<int>(u.offset.size()) != n)
    throw std::invalid_argument("build_support_from_box: offset size mismatch");
  for (int j = 0; j < k; ++j)
    if (u.lo[j] > u.hi[j])
      throw std::invalid_argument("build_support_from_box: interval with lo > hi");

  Matrix pinv = pseudoinverse(u.map);  // t = pinv (p - b)
  std::vector<double> pinv_b = matvec(pinv, u.offset);

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  // Box faces: lo_j <= pinv_j (p - b) <= hi_j.
  for (int j = 0; j < k; ++j) {
    std::vector<double> row(n, 0.0);
    for (int c = 0; c < n; ++c) row[c] = pinv(j, c);
    rows.push_back(row);
    rhs.push_back(u.hi[j] + pinv_b[j]);
    for (double& v : row) v = -v;
    rows.push_back(row);
    rhs.push_back(-u.lo[j] - pinv_b[j]);
  }
  // Equality pairs tying the coordinates the map cannot move:
  // (I - A pinv)(p - b) = 0.
  for (int r = 0; r < n; ++r) {
    std::vector<double> row(n, 0.0);
    double norm = 0.0;
    for (int c = 0; c < n; ++c) {
      double apc = 0.0;
      for (int j = 0; j < k; ++j) apc += u.map(r, j) * pinv(j, c);
      row[c] = (r == c ? 1.0 : 0.0) - apc;
      norm = std::max(norm, std::abs(row[c]));
    }
    if (norm < 1e-12) continue;
    double rb = dot(row, u.offset);
    rows.push_back(row);
    rhs.push_back(rb);
    for (double& v : row) v = -v;
    rows.push_back(row);
    rhs.push_back(-rb);
  }

  PolyhedralSupport s;
  s.w = Matrix(static_cast<int>(rows.size()), n);
  s.h = rhs;
  for (int r = 0; r < s.w.rows; ++r)
    for (int c = 0; c < n; ++c) s.w(r, c) = rows[r][c];
  return s;
}

std::optional<CoordinateBounds> coordinate_bounds(const PolyhedralSupport& support) {
  const int n = support.dim();
  CoordinateBounds cb;
  cb.lo.assign(n, 0.0);
  cb.hi.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int dir = 0; dir < 2; ++dir) {
      lp::LinearProgram prog;
      prog.sense = dir == 0 ? lp::Sense::minimize : lp::Sense::maximize;
      prog.c.assign(n, 0.0);
      prog.c[j] = 1.0;
      prog.a_ub = support.w;
      prog.b_ub = support.h;
      lp::LpSolution sol = lp::solve_lp(prog);
      if (sol.status != lp::Status::optimal) return std::nullopt;
      (dir == 0 ? cb.lo[j] : cb.hi[j]) = sol.objective;
    }
  }
  return cb;
}

ValidationReport validate(const AmbiguitySet& f, double tol) {
  const int n = f.support.dim();
  if (n != static_cast<int>(f.shape.vec_length()))
    throw std::invalid_argument("validate: support dimension does not match game shape");
  if (static_cast<int>(f.mean.size()) != n)
    throw std::invalid_argument("validate: mean dimension does not match support");

  ValidationReport rep;

  // (a) nonempty
  lp::LinearProgram feas;
  feas.c.assign(n, 0.0);
  feas.a_ub = f.support.w;
  feas.b_ub = f.support.h;
  lp::LpSolution fsol = lp::solve_lp(feas);
  bool nonempty = fsol.status == lp::Status::optimal;
  rep.checks.push_back({"support_nonempty", nonempty, nonempty ? "" : fsol.message});

  // (b) bounded
  bool bounded = false;
  std::string bdetail;
  if (nonempty) {
    if (auto cb = coordinate_bounds(f.support)) {
      bounded = true;
    } else {
      bdetail = "some coordinate is unbounded over the support";
    }
  } else {
    bdetail = "skipped: support empty";
  }
  rep.checks.push_back({"support_bounded", bounded, bdetail});

  // (c) W m <= h
  bool mean_ok = true;
  std::string mdetail;
  std::vector<double> wm = matvec(f.support.w, f.mean);
  for (int r = 0; r < f.support.num_rows(); ++r) {
    if (wm[r] > f.support.h[r] + tol) {
      mean_ok = false;
      std::ostringstream os;
      os << "mean violates support row " << r << " by " << wm[r] - f.support.h[r];
      mdetail = os.str();
      break;
    }
  }
  rep.checks.push_back({"mean_in_support", mean_ok, mdetail});

  // (d) s >= 0
  bool s_ok = f.mad_cap >= 0.0 && std::isfinite(f.mad_cap);
  rep.checks.push_back({"mad_cap_nonnegative", s_ok, s_ok ? "" : "s must be finite and >= 0"});

  return rep;
}

bool is_member(const DiscreteDistribution& q, const AmbiguitySet& f, double tol) {
  if (q.atoms.empty()) throw std::invalid_argument("is_member: empty distribution");
  if (q.atoms.size() != q.probs.size())
    throw std::invalid_argument("is_member: atom/probability count mismatch");
  const int n = f.support.dim();

  double psum = 0.0;
  for (double p : q.probs) {
    if (p < -1e-12) return false;
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12 + tol) return false;

  std::vector<double> mix(n, 0.0);
  double mad = 0.0;
  for (size_t k = 0; k < q.atoms.size(); ++k) {
    const std::vector<double>& v = q.atoms[k].vec();
    if (static_cast<int>(v.size()) != n)
      throw std::invalid_argument("is_member: atom dimension mismatch");
    std::vector<double> wv = matvec(f.support.w, v);
    for (int r = 0; r < f.support.num_rows(); ++r)
      if (wv[r] > f.support.h[r] + tol) return false;
    double dev = 0.0;
    for (int j = 0; j < n; ++j) {
      mix[j] += q.probs[k] * v[j];
      dev += std::abs(v[j] - f.mean[j]);
    }
    mad += q.probs[k] * dev;
  }
  for (int j = 0; j < n; ++j)
    if (std::abs(mix[j] - f.mean[j]) > tol) return false;
  return mad <= f.mad_cap + tol;
}

}  // namespace drg
