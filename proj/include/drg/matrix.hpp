#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace drg {

// Dense row-major matrix. Small problems only; no view machinery.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  std::vector<double> row(int r) const {
    return {data.begin() + static_cast<size_t>(r) * cols, data.begin() + static_cast<size_t>(r + 1) * cols};
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// y = M x
inline std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  assert(static_cast<int>(x.size()) == m.cols);
  std::vector<double> y(m.rows, 0.0);
  for (int r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < m.cols; ++c) s += m(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

// y = M^T x
inline std::vector<double> matvec_t(const Matrix& m, const std::vector<double>& x) {
  assert(static_cast<int>(x.size()) == m.rows);
  std::vector<double> y(m.cols, 0.0);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) y[c] += m(r, c) * x[r];
  return y;
}

}  // namespace drg
