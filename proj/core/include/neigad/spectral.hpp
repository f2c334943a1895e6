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
#include <string>
#include <vector>

#include "neigad/dense.hpp"
#include "neigad/graph.hpp"

namespace neigad {

// Top-t adjacency eigenpairs, eigenvalues descending. Columns are unit L2
// norm, pairwise orthogonal, and sign-canonical: the entry of largest
// magnitude in each column is positive (ties broken toward the lowest index).
struct EigenPairs {
  std::int64_t n = 0;
  std::int64_t t = 0;
  std::vector<double> eigenvalues;       // size t, descending
  std::vector<double> eigenvectors;      // n*t, column-major
  std::vector<double> residuals;         // ‖A·u − λ·u‖₂ per pair
  std::vector<std::uint8_t> clustered;   // pair sits in a near-degenerate cluster

  std::span<const double> vector(std::int64_t k) const {
    return std::span<const double>(eigenvectors.data() + k * n, static_cast<std::size_t>(n));
  }
};

struct EigOptions {
  double tol = 1e-10;              // absolute bound on ‖A·u − λ·u‖₂
  std::int64_t max_iter = 5000;    // total Lanczos steps across restarts
  std::int64_t t_cap = 10;         // guard on t; raise deliberately for larger runs
  bool largest_magnitude = false;  // default selects largest algebraic eigenvalues
  double cluster_gap = 1e-6;       // adjacent-eigenvalue gap that flags clustering
};

// Thick-restart Lanczos with full reorthogonalization on the symmetric
// adjacency matrix. Deterministic: the start vector comes from a fixed
// internal seed, so equal inputs give bit-identical output.
EigenPairs top_eigenpairs(const SparseGraph& g, std::int64_t t, const EigOptions& opts = {});

// Full-spectrum reference decomposition (LAPACK dsyevd on the densified
// adjacency). Refuses n > 1024; this is a verification oracle, not a solver.
EigenPairs dense_eig_oracle(const SparseGraph& g);

// Eigendecomposition of an arbitrary symmetric dense matrix, descending.
struct DenseEig {
  std::vector<double> values;
  DenseMatrix vectors;  // column k pairs with values[k]
};
DenseEig dense_sym_eig(const DenseMatrix& sym);

// Per-pair max-over-nodes gap between each eigenvector component and the
// 1/λ-scaled sum of its neighbors' components. Nodes of degree 0 are
// excluded; pairs with |λ| below `lambda_floor` are marked skipped because
// the 1/λ factor is meaningless there.
struct NeighborAverageReport {
  std::vector<double> residual;        // valid where skipped[k] == 0
  std::vector<std::uint8_t> skipped;

  double max_residual() const;         // over non-skipped pairs; 0 when none
};
NeighborAverageReport neighbor_average_residual(const SparseGraph& g, const EigenPairs& pairs,
                                                double lambda_floor = 1e-6);

// Node features with `scale`-weighted eigenvector columns appended.
struct AugmentedFeatures {
  std::int64_t base_d = 0;
  std::int64_t t = 0;
  double scale = 1.0;
  DenseMatrix values;  // n x (base_d + t); first base_d columns equal the input
};
AugmentedFeatures augment_features(const FeatureMatrix& x, const EigenPairs& pairs,
                                   double scale = 1.0);

// Neighbor-information score of a unit vector: u' = A⁴u, per-node squared
// gap (u_j − u'_j)², total = ‖u − A⁴u‖₂². For an exact unit eigenpair the
// total is (1 − λ⁴)².
struct NiScore {
  std::vector<double> per_node;
  double total = 0.0;
};
NiScore ni_score(const SparseGraph& g, std::span<const double> u);

// Evaluates both sides of the concatenation identity
// ‖(X‖U) − (X'‖U')‖_F² = ‖X−X'‖_F² + Σ_k ‖u_k−u'_k‖₂² and their gap.
struct AdditivityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};
AdditivityCheck concat_loss_additivity_check(const DenseMatrix& x, const DenseMatrix& x_prime,
                                             const DenseMatrix& u, const DenseMatrix& u_prime);

// CSV export: header row of eigenvalues, then one row per node.
std::string eigenpairs_to_csv(const EigenPairs& pairs);

// Flips each column so its largest-magnitude entry is positive (ties broken
// toward the lowest index). Shared by both solvers; exposed for tests.
void canonicalize_sign(std::int64_t n, std::int64_t t, std::vector<double>& columns);

}  // namespace neigad
