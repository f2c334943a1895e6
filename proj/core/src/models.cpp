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

#include "neigad/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include <json.hpp>

#include "neigad/error.hpp"
#include "neigad/spectral.hpp"

namespace neigad {

namespace {

constexpr std::int64_t kStructureBlockRows = 256;
constexpr std::int64_t kDenseStructureLimit = 4096;

// ‖A − ZZᵀ‖_F² processed in row blocks. Optionally accumulates the loss
// gradient d/dZ = -4·grad_coeff·(A − ZZᵀ)·Z into `d_z` and/or writes the
// per-row L2 reconstruction errors.
double structure_term(const SparseGraph& g, const DenseMatrix& z, double grad_coeff,
                      DenseMatrix* d_z, std::vector<double>* row_errors) {
  const std::int64_t n = g.num_nodes();
  const std::int64_t width = z.cols();
  if (row_errors) row_errors->assign(static_cast<std::size_t>(n), 0.0);

  double loss = 0.0;
  for (std::int64_t r0 = 0; r0 < n; r0 += kStructureBlockRows) {
    const std::int64_t rows = std::min(kStructureBlockRows, n - r0);
    DenseMatrix block(rows, width);
    for (std::int64_t i = 0; i < rows; ++i) {
      const auto src = z.row(r0 + i);
      std::copy(src.begin(), src.end(), block.row(i).begin());
    }
    // E = A_block − Z_block·Zᵀ, negated product first, then the sparse +1s.
    DenseMatrix err = matmul_nt(block, z);
    for (double& x : err.values()) x = -x;
    for (std::int64_t i = 0; i < rows; ++i) {
      const auto row = err.row(i);
      for (std::int64_t j : g.neighbors(r0 + i)) row[j] += 1.0;
      double rss = 0.0;
      for (std::int64_t j = 0; j < n; ++j) rss += row[j] * row[j];
      loss += rss;
      if (row_errors) (*row_errors)[r0 + i] = std::sqrt(rss);
    }
    if (d_z && grad_coeff != 0.0) {
      const DenseMatrix g_block = matmul(err, z);  // rows x width
      for (std::int64_t i = 0; i < rows; ++i) {
        const auto src = g_block.row(i);
        const auto dst = d_z->row(r0 + i);
        for (std::int64_t j = 0; j < width; ++j) dst[j] += -4.0 * grad_coeff * src[j];
      }
    }
  }
  return loss;
}

void row_l2_diff(const DenseMatrix& a, const DenseMatrix& b, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(a.rows()), 0.0);
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    double rss = 0.0;
    for (std::int64_t j = 0; j < a.cols(); ++j) {
      const double d = ra[j] - rb[j];
      rss += d * d;
    }
    out[i] = std::sqrt(rss);
  }
}

struct ForwardCaches {
  GcnLayerCache g1, g2, gd;
  MlpLayerCache m1, m2, md;
  const DenseMatrix& embedding(ModelKind kind) const {
    return kind == ModelKind::kMlpae ? m2.out : g2.out;
  }
  const DenseMatrix& reconstruction(ModelKind kind) const {
    return kind == ModelKind::kMlpae ? md.out : gd.out;
  }
};

ForwardCaches forward_pass(const SparseOperator& op, const DenseMatrix& x_in,
                           const ModelParams& params) {
  ForwardCaches c;
  if (params.kind == ModelKind::kMlpae) {
    c.m1 = mlp_layer_forward(x_in, params.enc_w1, params.enc_b1, Activation::kRelu);
    c.m2 = mlp_layer_forward(c.m1.out, params.enc_w2, params.enc_b2, Activation::kRelu);
    c.md = mlp_layer_forward(c.m2.out, params.dec_w, params.dec_b, Activation::kIdentity);
  } else {
    c.g1 = gcn_layer_forward(op, x_in, params.enc_w1, Activation::kRelu);
    c.g2 = gcn_layer_forward(op, c.g1.out, params.enc_w2, Activation::kRelu);
    c.gd = gcn_layer_forward(op, c.g2.out, params.dec_w, Activation::kIdentity);
  }
  return c;
}

double effective_alpha(ModelKind kind, double alpha) {
  return kind == ModelKind::kDominant ? alpha : 1.0;
}

void check_widths(const ModelParams& params, std::int64_t in_dim) {
  if (params.widths.size() != 3) throw ParamError("parameter width schedule must have 3 entries");
  if (params.widths[0] != in_dim) {
    throw DimensionError("model expects input width " + std::to_string(params.widths[0]) +
                         ", got " + std::to_string(in_dim));
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMlpae: return "mlpae";
    case ModelKind::kGcnae: return "gcnae";
    case ModelKind::kDominant: return "dominant";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "mlpae") return ModelKind::kMlpae;
  if (name == "gcnae") return ModelKind::kGcnae;
  if (name == "dominant") return ModelKind::kDominant;
  throw ParamError("unknown model kind '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::span<double>>> ModelParams::tensors() {
  std::vector<std::pair<std::string, std::span<double>>> out;
  out.emplace_back("enc_w1", std::span<double>(enc_w1.values()));
  out.emplace_back("enc_w2", std::span<double>(enc_w2.values()));
  out.emplace_back("dec_w", std::span<double>(dec_w.values()));
  if (kind == ModelKind::kMlpae) {
    out.emplace_back("enc_b1", std::span<double>(enc_b1));
    out.emplace_back("enc_b2", std::span<double>(enc_b2));
    out.emplace_back("dec_b", std::span<double>(dec_b));
  }
  return out;
}

std::vector<std::pair<std::string, std::span<const double>>> ModelParams::tensors() const {
  std::vector<std::pair<std::string, std::span<const double>>> out;
  out.emplace_back("enc_w1", std::span<const double>(enc_w1.values()));
  out.emplace_back("enc_w2", std::span<const double>(enc_w2.values()));
  out.emplace_back("dec_w", std::span<const double>(dec_w.values()));
  if (kind == ModelKind::kMlpae) {
    out.emplace_back("enc_b1", std::span<const double>(enc_b1));
    out.emplace_back("enc_b2", std::span<const double>(enc_b2));
    out.emplace_back("dec_b", std::span<const double>(dec_b));
  }
  return out;
}

ModelParams init_params(ModelKind kind, std::int64_t in_dim, std::int64_t hidden,
                        std::int64_t embed, Rng& rng) {
  if (in_dim < 1 || hidden < 1 || embed < 1) throw ParamError("layer widths must be positive");
  ModelParams p;
  p.kind = kind;
  p.widths = {in_dim, hidden, embed};
  const auto fill = [&rng](DenseMatrix& w, std::int64_t rows, std::int64_t cols) {
    w = DenseMatrix(rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
    for (double& x : w.values()) x = rng.uniform(-bound, bound);
  };
  fill(p.enc_w1, in_dim, hidden);
  fill(p.enc_w2, hidden, embed);
  fill(p.dec_w, embed, in_dim);
  if (kind == ModelKind::kMlpae) {
    p.enc_b1.assign(static_cast<std::size_t>(hidden), 0.0);
    p.enc_b2.assign(static_cast<std::size_t>(embed), 0.0);
    p.dec_b.assign(static_cast<std::size_t>(in_dim), 0.0);
  }
  return p;
}

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must be in [0, 1]");
  if (!(learning_rate > 0.0)) throw ParamError("learning_rate must be positive");
  if (epochs < 1) throw ParamError("epochs must be at least 1");
  if (hidden < 1) throw ParamError("hidden must be positive");
  if (embed < 1) throw ParamError("embedding must be positive");
  if (t < 0) throw ParamError("t must be nonnegative");
  if (!(eigen_scale > 0.0)) throw ParamError("eigen_scale must be positive");
  if (!(eigen_tol > 0.0)) throw ParamError("eigen_tol must be positive");
}

std::string scores_to_csv(const AnomalyScores& scores, std::span<const std::uint8_t> labels) {
  if (!labels.empty() && labels.size() != scores.score.size()) {
    throw DimensionError("label count does not match score count");
  }
  std::string out = "node_id,score,label\n";
  char buf[96];
  for (std::size_t i = 0; i < scores.score.size(); ++i) {
    if (labels.empty()) {
      std::snprintf(buf, sizeof buf, "%zu,%.12g,\n", i, scores.score[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.12g,%d\n", i, scores.score[i], int(labels[i]));
    }
    out += buf;
  }
  return out;
}

ModelOutputs model_forward(ModelKind kind, const SparseOperator& op, const DenseMatrix& x_in,
                           const ModelParams& params) {
  if (params.kind != kind) throw ParamError("parameter kind does not match requested kind");
  check_widths(params, x_in.cols());
  const ForwardCaches c = forward_pass(op, x_in, params);
  ModelOutputs out;
  out.z = c.embedding(kind);
  out.x_recon = c.reconstruction(kind);
  if (kind == ModelKind::kDominant) {
    if (x_in.rows() > kDenseStructureLimit) {
      throw ParamError("dense structure reconstruction is limited to n <= " +
                       std::to_string(kDenseStructureLimit));
    }
    out.a_recon = matmul_nt(out.z, out.z);
  }
  return out;
}

double reconstruction_loss(const DenseMatrix& a_target, const DenseMatrix& a_recon,
                           const DenseMatrix& x_in, const DenseMatrix& x_recon, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must be in [0, 1]");
  return (1.0 - alpha) * frobenius_sq_diff(a_target, a_recon) +
         alpha * frobenius_sq_diff(x_in, x_recon);
}

double reconstruction_loss(const DenseMatrix& x_in, const DenseMatrix& x_recon) {
  return frobenius_sq_diff(x_in, x_recon);
}

AnomalyScores node_scores(ModelKind kind, const DenseMatrix& a_target,
                          const DenseMatrix& a_recon, const DenseMatrix& x_in,
                          const DenseMatrix& x_recon, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must be in [0, 1]");
  if (a_target.rows() != x_in.rows()) throw DimensionError("structure/attribute row mismatch");
  std::vector<double> struct_err, attr_err;
  row_l2_diff(a_target, a_recon, struct_err);
  row_l2_diff(x_in, x_recon, attr_err);
  AnomalyScores out;
  out.kind = kind;
  out.alpha = alpha;
  out.score.resize(struct_err.size());
  for (std::size_t i = 0; i < struct_err.size(); ++i) {
    out.score[i] = (1.0 - alpha) * struct_err[i] + alpha * attr_err[i];
  }
  return out;
}

AnomalyScores node_scores(ModelKind kind, const DenseMatrix& x_in, const DenseMatrix& x_recon) {
  std::vector<double> attr_err;
  row_l2_diff(x_in, x_recon, attr_err);
  AnomalyScores out;
  out.kind = kind;
  out.alpha = 1.0;
  out.score = std::move(attr_err);
  return out;
}

LossAndGrads full_loss_and_grads(const SparseGraph& g, const SparseOperator& op,
                                 const DenseMatrix& x_in, const ModelParams& params,
                                 double alpha) {
  check_widths(params, x_in.cols());
  const double a = effective_alpha(params.kind, alpha);
  const ForwardCaches c = forward_pass(op, x_in, params);
  const DenseMatrix& x_recon = c.reconstruction(params.kind);

  LossAndGrads out;
  out.grads.kind = params.kind;
  out.grads.widths = params.widths;

  double loss = a * frobenius_sq_diff(x_in, x_recon);

  // d loss / d x_recon = 2a (x_recon − x_in)
  DenseMatrix d_xr = x_recon;
  add_scaled(d_xr, x_in, -1.0);
  for (double& v : d_xr.values()) v *= 2.0 * a;

  if (params.kind == ModelKind::kMlpae) {
    const MlpLayerGrads gd =
        mlp_layer_backward(c.m2.out, params.dec_w, c.md, d_xr, Activation::kIdentity);
    const MlpLayerGrads g2 =
        mlp_layer_backward(c.m1.out, params.enc_w2, c.m2, gd.d_h, Activation::kRelu);
    const MlpLayerGrads g1 =
        mlp_layer_backward(x_in, params.enc_w1, c.m1, g2.d_h, Activation::kRelu);
    out.grads.enc_w1 = g1.d_w;
    out.grads.enc_w2 = g2.d_w;
    out.grads.dec_w = gd.d_w;
    out.grads.enc_b1 = g1.d_b;
    out.grads.enc_b2 = g2.d_b;
    out.grads.dec_b = gd.d_b;
    out.loss = loss;
    return out;
  }

  const GcnLayerGrads gd =
      gcn_layer_backward(op, params.dec_w, c.gd, d_xr, Activation::kIdentity);
  DenseMatrix d_z = gd.d_h;
  if (params.kind == ModelKind::kDominant) {
    loss += (1.0 - a) * structure_term(g, c.g2.out, 1.0 - a, &d_z, nullptr);
  }
  const GcnLayerGrads g2 = gcn_layer_backward(op, params.enc_w2, c.g2, d_z, Activation::kRelu);
  const GcnLayerGrads g1 =
      gcn_layer_backward(op, params.enc_w1, c.g1, g2.d_h, Activation::kRelu);
  out.grads.enc_w1 = g1.d_w;
  out.grads.enc_w2 = g2.d_w;
  out.grads.dec_w = gd.d_w;
  out.loss = loss;
  return out;
}

TrainResult train(const AttributedGraph& dataset, const TrainConfig& config) {
  config.validate();
  dataset.validate();
  if (dataset.graph.num_nodes() < 1) throw ParamError("training requires a nonempty graph");

  double eigen_seconds = 0.0;
  DenseMatrix x_in = dataset.features;
  if (config.t > 0) {
    const auto start = std::chrono::steady_clock::now();
    EigOptions opts;
    opts.tol = config.eigen_tol;
    opts.t_cap = std::max<std::int64_t>(config.t, 10);
    const EigenPairs pairs = top_eigenpairs(dataset.graph, config.t, opts);
    x_in = augment_features(dataset.features, pairs, config.eigen_scale).values;
    eigen_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  SparseOperator op;
  if (config.kind != ModelKind::kMlpae) op = normalized_adjacency(dataset.graph);

  Rng init_rng = Rng::stream(config.seed, "init");
  ModelParams params = init_params(config.kind, x_in.cols(), config.hidden, config.embed,
                                   init_rng);

  auto shapes = params.tensors();
  std::vector<std::pair<std::string, std::int64_t>> adam_shapes;
  for (const auto& [name, view] : shapes) {
    adam_shapes.emplace_back(name, static_cast<std::int64_t>(view.size()));
  }
  AdamHyper hyper;
  hyper.learning_rate = config.learning_rate;
  AdamState adam(std::move(adam_shapes), hyper);

  TrainResult result;
  result.loss_history.reserve(static_cast<std::size_t>(config.epochs));

  const auto train_start = std::chrono::steady_clock::now();
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    LossAndGrads step = full_loss_and_grads(dataset.graph, op, x_in, params, config.alpha);
    if (!std::isfinite(step.loss)) {
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch), epoch);
    }
    result.loss_history.push_back(step.loss);

    auto param_views = params.tensors();
    auto grad_views = step.grads.tensors();
    std::vector<double*> ps;
    std::vector<const double*> gs;
    for (auto& [name, view] : param_views) ps.push_back(view.data());
    for (auto& [name, view] : grad_views) gs.push_back(view.data());
    adam.step(ps, gs);
  }
  const double train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - train_start).count();

  // Final forward pass for the reported scores.
  const ForwardCaches c = forward_pass(op, x_in, params);
  const DenseMatrix& x_recon = c.reconstruction(config.kind);
  AnomalyScores scores;
  scores.kind = config.kind;
  if (config.kind == ModelKind::kDominant) {
    std::vector<double> struct_err;
    structure_term(dataset.graph, c.embedding(config.kind), 0.0, nullptr, &struct_err);
    std::vector<double> attr_err;
    row_l2_diff(x_in, x_recon, attr_err);
    scores.alpha = config.alpha;
    scores.score.resize(attr_err.size());
    for (std::size_t i = 0; i < attr_err.size(); ++i) {
      scores.score[i] = (1.0 - config.alpha) * struct_err[i] + config.alpha * attr_err[i];
    }
  } else {
    std::vector<double> attr_err;
    row_l2_diff(x_in, x_recon, attr_err);
    scores.alpha = 1.0;
    scores.score = std::move(attr_err);
  }
  scores.train_seconds = train_seconds;
  scores.eigen_seconds = eigen_seconds;

  result.params = std::move(params);
  result.scores = std::move(scores);
  return result;
}

ComparisonReport run_comparison(const AttributedGraph& dataset, const TrainConfig& vanilla,
                                const TrainConfig& augmented) {
  if (!dataset.has_labels()) throw ParamError("run_comparison requires labeled data");
  const auto check_same = [](bool same, const char* field) {
    if (!same) {
      throw ParamError(std::string("comparison configs may differ only in t/eigen_scale; '") +
                       field + "' differs");
    }
  };
  check_same(vanilla.kind == augmented.kind, "kind");
  check_same(vanilla.alpha == augmented.alpha, "alpha");
  check_same(vanilla.learning_rate == augmented.learning_rate, "learning_rate");
  check_same(vanilla.epochs == augmented.epochs, "epochs");
  check_same(vanilla.hidden == augmented.hidden, "hidden");
  check_same(vanilla.embed == augmented.embed, "embed");
  check_same(vanilla.seed == augmented.seed, "seed");

  const auto evaluate = [&](const TrainConfig& config) {
    const TrainResult r = train(dataset, config);
    EvalReport report;
    report.roc_auc = roc_auc(r.scores.score, dataset.labels);
    const ScoreGap sg = score_gap(r.scores.score, dataset.labels);
    report.mean_anomalous = sg.mean_anomalous;
    report.mean_normal = sg.mean_normal;
    report.gap = sg.gap;
    report.train_seconds = r.scores.train_seconds;
    report.eigen_seconds = r.scores.eigen_seconds;
    report.seed = config.seed;
    return report;
  };

  ComparisonReport out;
  out.vanilla = evaluate(vanilla);
  out.augmented = evaluate(augmented);
  out.delta = out.augmented.roc_auc - out.vanilla.roc_auc;
  return out;
}

std::string params_to_json(const ModelParams& params) {
  const auto matrix_json = [](const DenseMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::int64_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["kind"] = to_string(params.kind);
  j["widths"] = params.widths;
  j["enc_w1"] = matrix_json(params.enc_w1);
  j["enc_w2"] = matrix_json(params.enc_w2);
  j["dec_w"] = matrix_json(params.dec_w);
  if (params.kind == ModelKind::kMlpae) {
    j["enc_b1"] = params.enc_b1;
    j["enc_b2"] = params.enc_b2;
    j["dec_b"] = params.dec_b;
  }
  return j.dump();
}

ModelParams params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model parameters: ") + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1) {
    throw ParseError("unsupported model parameter format version");
  }
  const auto matrix_from = [](const nlohmann::json& rows) {
    const std::int64_t r = static_cast<std::int64_t>(rows.size());
    if (r == 0) throw ParseError("empty parameter matrix");
    const std::int64_t c = static_cast<std::int64_t>(rows[0].size());
    DenseMatrix m(r, c);
    for (std::int64_t i = 0; i < r; ++i) {
      if (static_cast<std::int64_t>(rows[i].size()) != c) {
        throw ParseError("ragged parameter matrix");
      }
      for (std::int64_t k = 0; k < c; ++k) m(i, k) = rows[i][k].get<double>();
    }
    return m;
  };
  ModelParams p;
  p.kind = model_kind_from_string(j.at("kind").get<std::string>());
  p.widths = j.at("widths").get<std::vector<std::int64_t>>();
  p.enc_w1 = matrix_from(j.at("enc_w1"));
  p.enc_w2 = matrix_from(j.at("enc_w2"));
  p.dec_w = matrix_from(j.at("dec_w"));
  if (p.kind == ModelKind::kMlpae) {
    p.enc_b1 = j.at("enc_b1").get<std::vector<double>>();
    p.enc_b2 = j.at("enc_b2").get<std::vector<double>>();
    p.dec_b = j.at("dec_b").get<std::vector<double>>();
  }
  return p;
}

}  // namespace neigad
