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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "neigad/dense.hpp"

namespace neigad {

// Real-weighted sparse operator in CSR form.
struct SparseOperator {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::int64_t> row_offsets{0};
  std::vector<std::int64_t> col_indices;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(col_indices.size()); }
  DenseMatrix densify() const;
};

// y = op · x. Accumulation runs in CSR row order, so results are
// reproducible bit for bit.
void spmv(const SparseOperator& op, std::span<const double> x, std::span<double> y);

// Sparse · dense product, same deterministic accumulation order.
DenseMatrix spmm(const SparseOperator& op, const DenseMatrix& h);

}  // namespace neigad
