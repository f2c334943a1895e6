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
#include <vector>

#include "neigad/dense.hpp"
#include "neigad/graph.hpp"

namespace neigad::internal {

// y = A·x over the binary adjacency pattern, CSR row order.
void adj_matvec(const SparseGraph& g, const double* x, double* y);

// Cyclic Jacobi eigendecomposition of a small symmetric matrix, descending.
// Used for the projected matrices inside the restarted Lanczos iteration;
// the full-size reference path goes through LAPACK instead.
void jacobi_eigh(const DenseMatrix& sym, std::vector<double>& values, DenseMatrix& vectors);

}  // namespace neigad::internal
