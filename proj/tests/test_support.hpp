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
#include <utility>
#include <vector>

#include "neigad/graph.hpp"
#include "neigad/rng.hpp"

namespace neigad::testing {

inline SparseGraph make_graph(std::int64_t n,
                              std::vector<std::pair<std::int64_t, std::int64_t>> edges) {
  return SparseGraph::from_edges(n, edges);
}

inline SparseGraph k2() { return make_graph(2, {{0, 1}}); }
inline SparseGraph k3() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline SparseGraph p3() { return make_graph(3, {{0, 1}, {1, 2}}); }
inline SparseGraph star4() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}}); }  // K_{1,3}

// Erdos-Renyi style graph from a deterministic stream.
inline SparseGraph random_graph(std::int64_t n, double p, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, "test-graph");
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return make_graph(n, std::move(edges));
}

inline DenseMatrix random_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed,
                                 double lo = -1.0, double hi = 1.0) {
  Rng rng = Rng::stream(seed, "test-matrix");
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = rng.uniform(lo, hi);
  return m;
}

}  // namespace neigad::testing
