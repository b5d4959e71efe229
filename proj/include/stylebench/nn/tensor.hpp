#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace stylebench::nn {

// Row-major dense matrix of doubles.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  void resize(size_t r, size_t c) {
    rows = r;
    cols = c;
    data.assign(r * c, 0.0);
  }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  double* row(size_t i) { return data.data() + i * cols; }
  const double* row(size_t i) const { return data.data() + i * cols; }
  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }
  size_t size() const { return data.size(); }
};

// Z = X * Wt + broadcast(b). X: batch x in, Wt: in x out, Z: batch x out.
// Accumulation order is fixed (j ascending), so results are bit-reproducible.
inline void linear_forward(const Matrix& X, const Matrix& Wt, std::span<const double> b,
                           Matrix& Z) {
  assert(X.cols == Wt.rows && b.size() == Wt.cols);
  Z.resize(X.rows, Wt.cols);
  const size_t in = X.cols, out = Wt.cols;
  for (size_t i = 0; i < X.rows; ++i) {
    double* __restrict z = Z.row(i);
    for (size_t o = 0; o < out; ++o) z[o] = b[o];
    const double* __restrict x = X.row(i);
    for (size_t j = 0; j < in; ++j) {
      const double xv = x[j];
      if (xv == 0.0) continue;
      const double* __restrict w = Wt.row(j);
      for (size_t o = 0; o < out; ++o) z[o] += xv * w[o];
    }
  }
}

// dX = dZ * W. dZ: batch x out, W: out x in, dX: batch x in.
inline void linear_backward_input(const Matrix& dZ, const Matrix& W, Matrix& dX) {
  assert(dZ.cols == W.rows);
  dX.resize(dZ.rows, W.cols);
  const size_t out = W.rows, in = W.cols;
  for (size_t i = 0; i < dZ.rows; ++i) {
    double* __restrict dx = dX.row(i);
    const double* __restrict dz = dZ.row(i);
    for (size_t o = 0; o < out; ++o) {
      const double g = dz[o];
      if (g == 0.0) continue;
      const double* __restrict w = W.row(o);
      for (size_t j = 0; j < in; ++j) dx[j] += g * w[j];
    }
  }
}

// dW += dZ^T * X, db += column sums of dZ. dW: out x in.
inline void linear_backward_params(const Matrix& dZ, const Matrix& X, Matrix& dW,
                                   std::span<double> db) {
  assert(dZ.rows == X.rows && dW.rows == dZ.cols && dW.cols == X.cols && db.size() == dZ.cols);
  const size_t out = dZ.cols, in = X.cols;
  for (size_t i = 0; i < dZ.rows; ++i) {
    const double* __restrict dz = dZ.row(i);
    const double* __restrict x = X.row(i);
    for (size_t o = 0; o < out; ++o) {
      const double g = dz[o];
      if (g == 0.0) continue;
      db[o] += g;
      double* __restrict dw = dW.row(o);
      for (size_t j = 0; j < in; ++j) dw[j] += g * x[j];
    }
  }
}

inline void transpose_into(const Matrix& src, Matrix& dst) {
  dst.resize(src.cols, src.rows);
  for (size_t i = 0; i < src.rows; ++i)
    for (size_t j = 0; j < src.cols; ++j) dst.at(j, i) = src.at(i, j);
}

}  // namespace stylebench::nn
