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

#include "neigad/sparse.hpp"

#include <string>

#include "neigad/error.hpp"

namespace neigad {

DenseMatrix SparseOperator::densify() const {
  DenseMatrix m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      m(i, col_indices[k]) = values[k];
    }
  }
  return m;
}

void spmv(const SparseOperator& op, std::span<const double> x, std::span<double> y) {
  if (static_cast<std::int64_t>(x.size()) != op.cols ||
      static_cast<std::int64_t>(y.size()) != op.rows) {
    throw DimensionError("spmv: operator is " + std::to_string(op.rows) + "x" +
                         std::to_string(op.cols) + ", vectors are " + std::to_string(y.size()) +
                         "/" + std::to_string(x.size()));
  }
  for (std::int64_t i = 0; i < op.rows; ++i) {
    double sum = 0.0;
    for (std::int64_t k = op.row_offsets[i]; k < op.row_offsets[i + 1]; ++k) {
      sum += op.values[k] * x[op.col_indices[k]];
    }
    y[i] = sum;
  }
}

DenseMatrix spmm(const SparseOperator& op, const DenseMatrix& h) {
  if (op.cols != h.rows()) {
    throw DimensionError("spmm: operator columns " + std::to_string(op.cols) +
                         " vs matrix rows " + std::to_string(h.rows()));
  }
  DenseMatrix out(op.rows, h.cols());
  const std::int64_t w = h.cols();
  const double* ph = h.values().data();
  double* po = out.values().data();
  for (std::int64_t i = 0; i < op.rows; ++i) {
    double* orow = po + i * w;
    for (std::int64_t k = op.row_offsets[i]; k < op.row_offsets[i + 1]; ++k) {
      const double v = op.values[k];
      const double* hrow = ph + op.col_indices[k] * w;
      for (std::int64_t j = 0; j < w; ++j) orow[j] += v * hrow[j];
    }
  }
  return out;
}

}  // namespace neigad
