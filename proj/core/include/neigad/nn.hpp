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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "neigad/dense.hpp"
#include "neigad/sparse.hpp"

namespace neigad {

enum class Activation { kIdentity, kRelu, kSigmoid };

// Graph convolution: out = act(op · h · w). Gradients are derived by hand;
// the model graphs here are small and fixed, which keeps the numerical core
// auditable without an autodiff tape.
struct GcnLayerCache {
  DenseMatrix aggregated;  // op · h
  DenseMatrix pre;         // op · h · w
  DenseMatrix out;
};
GcnLayerCache gcn_layer_forward(const SparseOperator& op, const DenseMatrix& h,
                                const DenseMatrix& w, Activation act);

struct GcnLayerGrads {
  DenseMatrix d_w;
  DenseMatrix d_h;
};
GcnLayerGrads gcn_layer_backward(const SparseOperator& op, const DenseMatrix& w,
                                 const GcnLayerCache& cache, const DenseMatrix& d_out,
                                 Activation act);

// Fully connected layer: out = act(h · w + b), bias broadcast over rows.
struct MlpLayerCache {
  DenseMatrix pre;
  DenseMatrix out;
};
MlpLayerCache mlp_layer_forward(const DenseMatrix& h, const DenseMatrix& w,
                                std::span<const double> b, Activation act);

struct MlpLayerGrads {
  DenseMatrix d_w;
  std::vector<double> d_b;
  DenseMatrix d_h;
};
MlpLayerGrads mlp_layer_backward(const DenseMatrix& h, const DenseMatrix& w,
                                 const MlpLayerCache& cache, const DenseMatrix& d_out,
                                 Activation act);

struct AdamHyper {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction over a fixed set of named parameter tensors.
class AdamState {
 public:
  AdamState(std::vector<std::pair<std::string, std::int64_t>> shapes, AdamHyper hyper = {});

  // Applies one update in place. Throws ParamError naming the parameter when
  // a gradient is non-finite.
  void step(std::span<double* const> params, std::span<const double* const> grads);

  std::int64_t step_count() const { return step_; }
  const AdamHyper& hyper() const { return hyper_; }

 private:
  std::vector<std::pair<std::string, std::int64_t>> shapes_;
  AdamHyper hyper_;
  std::int64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// Max relative gap between `analytic_grad` and central finite differences of
// `loss` at `params`. `params` is scratched and restored in place.
double finite_diff_check(const std::function<double(std::span<const double>)>& loss,
                         std::span<double> params, std::span<const double> analytic_grad,
                         double eps = 1e-5);

}  // namespace neigad
