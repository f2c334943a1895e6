// Copyright 2026 The NeiGAD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neigad/dense.hpp"

#include <cmath>
#include <string>

#include "neigad/error.hpp"

namespace neigad {

namespace {

void check_shapes(std::int64_t got_rows, std::int64_t got_cols, std::int64_t want_rows,
                  std::int64_t want_cols, const char* what) {
  if (got_rows != want_rows || got_cols != want_cols) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want_rows) + "x" +
                         std::to_string(want_cols) + ", got " + std::to_string(got_rows) + "x" +
                         std::to_string(got_cols));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::int64_t rows, std::int64_t cols)
    : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows * cols), 0.0) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

DenseMatrix::DenseMatrix(std::int64_t rows, std::int64_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
  if (static_cast<std::int64_t>(v_.size()) != rows * cols) {
    throw DimensionError("value array size does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

bool DenseMatrix::all_finite() const {
  for (double x : v_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

DenseMatrix identity_matrix(std::int64_t n) {
  DenseMatrix m(n, n);
  for (std::int64_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  }
  DenseMatrix c(a.rows(), b.cols());
  const std::int64_t n = a.rows(), k = a.cols(), m = b.cols();
  const double* pa = a.values().data();
  const double* pb = b.values().data();
  double* pc = c.values().data();
  // ikj order: streams over b and c rows.
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t p = 0; p < k; ++p) {
      const double aip = pa[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * m;
      double* crow = pc + i * m;
      for (std::int64_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: row counts " + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
  }
  DenseMatrix c(a.cols(), b.cols());
  const std::int64_t n = a.rows(), k = a.cols(), m = b.cols();
  const double* pa = a.values().data();
  const double* pb = b.values().data();
  double* pc = c.values().data();
  for (std::int64_t p = 0; p < n; ++p) {
    const double* arow = pa + p * k;
    const double* brow = pb + p * m;
    for (std::int64_t i = 0; i < k; ++i) {
      const double aip = arow[i];
      if (aip == 0.0) continue;
      double* crow = pc + i * m;
      for (std::int64_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: column counts " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()));
  }
  DenseMatrix c(a.rows(), b.rows());
  const std::int64_t n = a.rows(), k = a.cols(), m = b.rows();
  const double* pa = a.values().data();
  const double* pb = b.values().data();
  double* pc = c.values().data();
  for (std::int64_t i = 0; i < n; ++i) {
    const double* arow = pa + i * k;
    double* crow = pc + i * m;
    for (std::int64_t j = 0; j < m; ++j) {
      const double* brow = pb + j * k;
      double sum = 0.0;
      for (std::int64_t p = 0; p < k; ++p) sum += arow[p] * brow[p];
      crow[j] = sum;
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

void add_scaled(DenseMatrix& a, const DenseMatrix& b, double coeff) {
  check_shapes(b.rows(), b.cols(), a.rows(), a.cols(), "add_scaled");
  double* pa = a.values().data();
  const double* pb = b.values().data();
  const std::int64_t sz = a.size();
  for (std::int64_t i = 0; i < sz; ++i) pa[i] += coeff * pb[i];
}

double frobenius_sq_diff(const DenseMatrix& a, const DenseMatrix& b) {
  check_shapes(b.rows(), b.cols(), a.rows(), a.cols(), "frobenius_sq_diff");
  const double* pa = a.values().data();
  const double* pb = b.values().data();
  double sum = 0.0;
  const std::int64_t sz = a.size();
  for (std::int64_t i = 0; i < sz; ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum;
}

double frobenius_sq(const DenseMatrix& a) {
  double sum = 0.0;
  for (double x : a.values()) sum += x * x;
  return sum;
}

}  // namespace neigad
