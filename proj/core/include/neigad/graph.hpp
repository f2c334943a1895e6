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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "neigad/dense.hpp"
#include "neigad/sparse.hpp"

namespace neigad {

// Undirected simple graph with binary edges, stored as a symmetric CSR
// pattern. Construction symmetrizes, deduplicates, and drops self-loops;
// column indices are sorted ascending within each row. Immutable once built.
class SparseGraph {
 public:
  SparseGraph() = default;

  static SparseGraph from_edges(std::int64_t n,
                                std::span<const std::pair<std::int64_t, std::int64_t>> edges);

  std::int64_t num_nodes() const { return n_; }
  // Directed entry count (2x the undirected edge count).
  std::int64_t num_entries() const { return static_cast<std::int64_t>(col_indices_.size()); }
  std::int64_t num_undirected_edges() const { return num_entries() / 2; }

  std::int64_t degree(std::int64_t i) const { return row_offsets_[i + 1] - row_offsets_[i]; }
  std::span<const std::int64_t> neighbors(std::int64_t i) const {
    return std::span<const std::int64_t>(col_indices_.data() + row_offsets_[i],
                                         static_cast<std::size_t>(degree(i)));
  }
  bool has_edge(std::int64_t i, std::int64_t j) const;

  const std::vector<std::int64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::int64_t>& col_indices() const { return col_indices_; }

  // Transpose-equality check; true for every graph built through from_edges.
  bool is_symmetric() const;

  DenseMatrix densify() const;  // guarded to n <= 4096

  friend bool operator==(const SparseGraph& a, const SparseGraph& b) {
    return a.n_ == b.n_ && a.row_offsets_ == b.row_offsets_ && a.col_indices_ == b.col_indices_;
  }

 private:
  std::int64_t n_ = 0;
  std::vector<std::int64_t> row_offsets_{0};
  std::vector<std::int64_t> col_indices_;
};

// Node features are a plain dense matrix: one row per node.
using FeatureMatrix = DenseMatrix;

struct AttributedGraph {
  SparseGraph graph;
  FeatureMatrix features;
  std::vector<std::uint8_t> labels;  // empty, or one 0/1 anomaly flag per node

  bool has_labels() const { return !labels.empty(); }
  void validate() const;
};

// Parses "i j" pairs, one per line; '#' starts a comment. A header line
// "n=<int>" may declare the node count; an explicit argument takes precedence
// but must agree with the header when both are present.
SparseGraph parse_edge_list(std::string_view text, std::optional<std::int64_t> n = std::nullopt);

// MatrixMarket coordinate input (pattern/real/integer, symmetric or general);
// 1-based indices, values ignored, result symmetrized.
SparseGraph parse_matrix_market(std::string_view text);

// Headerless rectangular CSV of reals.
FeatureMatrix load_features_csv(std::string_view text);

// One 0/1 per line.
std::vector<std::uint8_t> parse_labels(std::string_view text);

// D̃^{-1/2} (A + I) D̃^{-1/2} with D̃ the degree of A + I. Row i holds
// 1/sqrt((deg_i+1)(deg_j+1)) for j in N_i and 1/(deg_i+1) on the diagonal;
// an isolated node gets a lone diagonal entry of exactly 1.
SparseOperator normalized_adjacency(const SparseGraph& g);

struct StructuralInjection {
  SparseGraph graph;
  std::vector<std::uint8_t> labels;
  std::int64_t added_edges = 0;
};

// Densifies `clique_count` disjoint random node sets of size `clique_size`
// into cliques and labels their members anomalous. Existing edges are kept.
StructuralInjection inject_structural_anomalies(const SparseGraph& g, std::int64_t clique_count,
                                                std::int64_t clique_size, std::uint64_t seed);

struct ContextualInjection {
  FeatureMatrix features;
  std::vector<std::uint8_t> labels;
};

// For each of `target_count` distinct nodes, samples `pool_size` other nodes
// and copies the feature row farthest in Euclidean distance (distances and
// replacement values both taken from the original matrix).
ContextualInjection inject_contextual_anomalies(const FeatureMatrix& x, std::int64_t target_count,
                                                std::int64_t pool_size, std::uint64_t seed);

// Stochastic block model with per-community Gaussian features. Nodes are
// assigned to `blocks` contiguous communities; node features are the
// community mean plus feature_noise * N(0, 1).
AttributedGraph generate_synthetic(std::int64_t n, std::int64_t blocks, double p_in, double p_out,
                                   std::int64_t d, std::uint64_t seed,
                                   double feature_noise = 0.3);

}  // namespace neigad
