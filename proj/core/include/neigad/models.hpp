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
#include <string_view>
#include <vector>

#include "neigad/dense.hpp"
#include "neigad/eval.hpp"
#include "neigad/graph.hpp"
#include "neigad/nn.hpp"
#include "neigad/rng.hpp"
#include "neigad/sparse.hpp"

namespace neigad {

// Reconstruction detectors. MLPAE and GCNAE are plain autoencoders over node
// attributes; the full model reconstructs structure (ZZᵀ) and attributes
// jointly with an alpha-weighted loss.
enum class ModelKind { kMlpae, kGcnae, kDominant };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

// Encoder d -> hidden -> embed (relu), attribute decoder embed -> d
// (identity). MLPAE layers carry biases; GCN layers do not.
struct ModelParams {
  ModelKind kind = ModelKind::kDominant;
  std::vector<std::int64_t> widths;  // {in, hidden, embed}
  DenseMatrix enc_w1, enc_w2, dec_w;
  std::vector<double> enc_b1, enc_b2, dec_b;  // empty for GCN-based kinds

  // Canonical parameter order shared by training, Adam state, and the
  // gradient checker.
  std::vector<std::pair<std::string, std::span<double>>> tensors();
  std::vector<std::pair<std::string, std::span<const double>>> tensors() const;
};

ModelParams init_params(ModelKind kind, std::int64_t in_dim, std::int64_t hidden,
                        std::int64_t embed, Rng& rng);

std::string params_to_json(const ModelParams& params);
ModelParams params_from_json(std::string_view text);

struct TrainConfig {
  ModelKind kind = ModelKind::kDominant;
  double alpha = 0.8;  // weight of the attribute term; structure gets 1 - alpha
  double learning_rate = 0.005;
  std::int64_t epochs = 100;
  std::int64_t hidden = 64;
  std::int64_t embed = 32;
  std::int64_t t = 0;  // eigenvectors appended to the features; 0 = vanilla
  double eigen_scale = 1.0;
  double eigen_tol = 1e-10;
  std::uint64_t seed = 0;

  void validate() const;  // throws ParamError naming the field
};

struct AnomalyScores {
  std::vector<double> score;  // length n, nonnegative
  double alpha = 1.0;         // effective weighting used (1 for attribute-only kinds)
  ModelKind kind = ModelKind::kDominant;
  double train_seconds = 0.0;
  double eigen_seconds = 0.0;
};

// CSV "node_id,score,label"; the label column is left empty when no labels
// are supplied.
std::string scores_to_csv(const AnomalyScores& scores, std::span<const std::uint8_t> labels);

struct ModelOutputs {
  DenseMatrix z;        // n x embed
  DenseMatrix a_recon;  // ZZᵀ for the structure-decoding kind, else 0x0
  DenseMatrix x_recon;  // n x in
};

// Full forward pass. The structure reconstruction is materialized densely,
// so this is the desk-scale path (n <= 4096 for the structure-decoding
// kind); training streams the structure term instead.
ModelOutputs model_forward(ModelKind kind, const SparseOperator& op, const DenseMatrix& x_in,
                           const ModelParams& params);

// (1-alpha)·‖A − A'‖_F² + alpha·‖X − X'‖_F².
double reconstruction_loss(const DenseMatrix& a_target, const DenseMatrix& a_recon,
                           const DenseMatrix& x_in, const DenseMatrix& x_recon, double alpha);
// Attribute-only form: the structure term is defined as 0 and alpha is 1.
double reconstruction_loss(const DenseMatrix& x_in, const DenseMatrix& x_recon);

// Row-wise scores: (1-alpha)·‖A[i,:] − A'[i,:]‖₂ + alpha·‖X[i,:] − X'[i,:]‖₂.
AnomalyScores node_scores(ModelKind kind, const DenseMatrix& a_target,
                          const DenseMatrix& a_recon, const DenseMatrix& x_in,
                          const DenseMatrix& x_recon, double alpha);
AnomalyScores node_scores(ModelKind kind, const DenseMatrix& x_in, const DenseMatrix& x_recon);

// Loss and parameter gradients for one full-batch pass. The structure term
// runs in row blocks: the dense n x n reconstruction is never materialized.
struct LossAndGrads {
  double loss = 0.0;
  ModelParams grads;  // same shapes as the parameters
};
LossAndGrads full_loss_and_grads(const SparseGraph& g, const SparseOperator& op,
                                 const DenseMatrix& x_in, const ModelParams& params,
                                 double alpha);

struct TrainResult {
  ModelParams params;
  std::vector<double> loss_history;  // one entry per epoch, pre-update loss
  AnomalyScores scores;              // from a final forward pass
};
TrainResult train(const AttributedGraph& dataset, const TrainConfig& config);

// Paired vanilla-vs-augmented run on the same dataset, seed, and labels.
// The configurations may differ only in t and eigen_scale.
struct ComparisonReport {
  EvalReport vanilla;
  EvalReport augmented;
  double delta = 0.0;  // augmented auc - vanilla auc
};
ComparisonReport run_comparison(const AttributedGraph& dataset, const TrainConfig& vanilla,
                                const TrainConfig& augmented);

}  // namespace neigad
