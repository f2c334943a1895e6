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

#include "neigad/nn.hpp"

#include <cmath>
#include <utility>

#include "neigad/error.hpp"

namespace neigad {

namespace {

DenseMatrix apply_activation(Activation act, const DenseMatrix& pre) {
  if (act == Activation::kIdentity) return pre;
  DenseMatrix out(pre.rows(), pre.cols());
  const double* p = pre.values().data();
  double* o = out.values().data();
  const std::int64_t sz = pre.size();
  if (act == Activation::kRelu) {
    for (std::int64_t i = 0; i < sz; ++i) o[i] = p[i] > 0.0 ? p[i] : 0.0;
  } else {
    for (std::int64_t i = 0; i < sz; ++i) o[i] = 1.0 / (1.0 + std::exp(-p[i]));
  }
  return out;
}

// d_pre = d_out ⊙ act'(pre), with sigmoid' taken from the stored output.
DenseMatrix activation_backward(Activation act, const DenseMatrix& pre, const DenseMatrix& out,
                                const DenseMatrix& d_out) {
  if (act == Activation::kIdentity) return d_out;
  DenseMatrix d_pre(pre.rows(), pre.cols());
  const double* p = pre.values().data();
  const double* o = out.values().data();
  const double* g = d_out.values().data();
  double* dp = d_pre.values().data();
  const std::int64_t sz = pre.size();
  if (act == Activation::kRelu) {
    for (std::int64_t i = 0; i < sz; ++i) dp[i] = p[i] > 0.0 ? g[i] : 0.0;
  } else {
    for (std::int64_t i = 0; i < sz; ++i) dp[i] = g[i] * o[i] * (1.0 - o[i]);
  }
  return d_pre;
}

}  // namespace

GcnLayerCache gcn_layer_forward(const SparseOperator& op, const DenseMatrix& h,
                                const DenseMatrix& w, Activation act) {
  GcnLayerCache cache;
  cache.aggregated = spmm(op, h);
  cache.pre = matmul(cache.aggregated, w);
  cache.out = apply_activation(act, cache.pre);
  return cache;
}

GcnLayerGrads gcn_layer_backward(const SparseOperator& op, const DenseMatrix& w,
                                 const GcnLayerCache& cache, const DenseMatrix& d_out,
                                 Activation act) {
  const DenseMatrix d_pre = activation_backward(act, cache.pre, cache.out, d_out);
  GcnLayerGrads grads;
  grads.d_w = matmul_tn(cache.aggregated, d_pre);
  // d_h = opᵀ · (d_pre · wᵀ); op is symmetric here.
  grads.d_h = spmm(op, matmul_nt(d_pre, w));
  return grads;
}

MlpLayerCache mlp_layer_forward(const DenseMatrix& h, const DenseMatrix& w,
                                std::span<const double> b, Activation act) {
  if (static_cast<std::int64_t>(b.size()) != w.cols()) {
    throw DimensionError("bias length " + std::to_string(b.size()) + " != layer width " +
                         std::to_string(w.cols()));
  }
  MlpLayerCache cache;
  cache.pre = matmul(h, w);
  for (std::int64_t i = 0; i < cache.pre.rows(); ++i) {
    const auto row = cache.pre.row(i);
    for (std::int64_t j = 0; j < cache.pre.cols(); ++j) row[j] += b[j];
  }
  cache.out = apply_activation(act, cache.pre);
  return cache;
}

MlpLayerGrads mlp_layer_backward(const DenseMatrix& h, const DenseMatrix& w,
                                 const MlpLayerCache& cache, const DenseMatrix& d_out,
                                 Activation act) {
  const DenseMatrix d_pre = activation_backward(act, cache.pre, cache.out, d_out);
  MlpLayerGrads grads;
  grads.d_w = matmul_tn(h, d_pre);
  grads.d_b.assign(static_cast<std::size_t>(d_pre.cols()), 0.0);
  for (std::int64_t i = 0; i < d_pre.rows(); ++i) {
    const auto row = d_pre.row(i);
    for (std::int64_t j = 0; j < d_pre.cols(); ++j) grads.d_b[j] += row[j];
  }
  grads.d_h = matmul_nt(d_pre, w);
  return grads;
}

AdamState::AdamState(std::vector<std::pair<std::string, std::int64_t>> shapes, AdamHyper hyper)
    : shapes_(std::move(shapes)), hyper_(hyper) {
  m_.reserve(shapes_.size());
  v_.reserve(shapes_.size());
  for (const auto& [name, size] : shapes_) {
    if (size < 0) throw ParamError("negative parameter size for '" + name + "'");
    m_.emplace_back(static_cast<std::size_t>(size), 0.0);
    v_.emplace_back(static_cast<std::size_t>(size), 0.0);
  }
}

void AdamState::step(std::span<double* const> params, std::span<const double* const> grads) {
  if (params.size() != shapes_.size() || grads.size() != shapes_.size()) {
    throw DimensionError("adam step: expected " + std::to_string(shapes_.size()) +
                         " parameter tensors");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(step_));
  for (std::size_t p = 0; p < shapes_.size(); ++p) {
    const std::int64_t size = shapes_[p].second;
    double* x = params[p];
    const double* g = grads[p];
    std::vector<double>& m = m_[p];
    std::vector<double>& v = v_[p];
    for (std::int64_t i = 0; i < size; ++i) {
      if (!std::isfinite(g[i])) {
        throw ParamError("non-finite gradient in parameter '" + shapes_[p].first + "'");
      }
      m[i] = hyper_.beta1 * m[i] + (1.0 - hyper_.beta1) * g[i];
      v[i] = hyper_.beta2 * v[i] + (1.0 - hyper_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      x[i] -= hyper_.learning_rate * m_hat / (std::sqrt(v_hat) + hyper_.epsilon);
    }
  }
}

double finite_diff_check(const std::function<double(std::span<const double>)>& loss,
                         std::span<double> params, std::span<const double> analytic_grad,
                         double eps) {
  if (params.size() != analytic_grad.size()) {
    throw DimensionError("finite_diff_check: gradient size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double up = loss(params);
    params[i] = saved - eps;
    const double down = loss(params);
    params[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw ParamError("non-finite loss during finite difference probe");
    }
    const double central = (up - down) / (2.0 * eps);
    const double rel = std::abs(analytic_grad[i] - central) / (std::abs(central) + 1e-8);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace neigad
