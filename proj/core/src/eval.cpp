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

#include "neigad/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "neigad/error.hpp"
#include "neigad/graph.hpp"
#include "neigad/spectral.hpp"

namespace neigad {

namespace {

void require_both_classes(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("scores and labels differ in length: " + std::to_string(scores.size()) +
                         " vs " + std::to_string(labels.size()));
  }
  bool has0 = false, has1 = false;
  for (std::uint8_t l : labels) {
    if (l == 0) has0 = true;
    else has1 = true;
  }
  if (!has0 || !has1) {
    throw ParamError("metric undefined: labels contain a single class");
  }
}

}  // namespace

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  if (std::isnan(report.roc_auc)) {
    j["roc_auc"] = nullptr;
  } else {
    j["roc_auc"] = report.roc_auc;
  }
  j["mean_anomalous"] = report.mean_anomalous;
  j["mean_normal"] = report.mean_normal;
  j["gap"] = report.gap;
  j["train_seconds"] = report.train_seconds;
  j["eigen_seconds"] = report.eigen_seconds;
  j["seed"] = report.seed;
  return j.dump(2);
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  require_both_classes(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks across tie groups; rank sums stay exact half-integers.
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }

  double pos_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k]) {
      pos_rank_sum += rank[k];
      ++positives;
    }
  }
  const std::size_t negatives = n - positives;
  const double u = pos_rank_sum - static_cast<double>(positives) *
                                      (static_cast<double>(positives) + 1.0) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

ScoreGap score_gap(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  require_both_classes(scores, labels);
  double sum1 = 0.0, sum0 = 0.0;
  std::size_t n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i]) {
      sum1 += scores[i];
      ++n1;
    } else {
      sum0 += scores[i];
      ++n0;
    }
  }
  ScoreGap out;
  out.mean_anomalous = sum1 / static_cast<double>(n1);
  out.mean_normal = sum0 / static_cast<double>(n0);
  out.gap = out.mean_anomalous - out.mean_normal;
  return out;
}

std::vector<double> min_max_normalize(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(out.begin(), out.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  for (double& x : out) x = (x - lo) / (hi - lo);
  return out;
}

OverheadReport overhead_report(const EvalReport& vanilla, const EvalReport& augmented) {
  if (!(vanilla.train_seconds > 0.0)) {
    throw ParamError("overhead undefined: vanilla training time is zero");
  }
  OverheadReport out;
  out.vanilla_train_seconds = vanilla.train_seconds;
  out.augmented_train_seconds = augmented.train_seconds;
  out.augmented_eigen_seconds = augmented.eigen_seconds;
  out.relative =
      (augmented.train_seconds + augmented.eigen_seconds) / vanilla.train_seconds - 1.0;
  return out;
}

double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ParamError("slope fit needs >= 2 matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw ParamError("log-log fit needs positive data");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ParamError("log-log fit is degenerate");
  return (n * sxy - sx * sy) / denom;
}

ScalingProbeResult scaling_probe(std::span<const std::int64_t> sizes, std::int64_t t,
                                 double avg_degree, std::int64_t seeds) {
  if (sizes.size() < 3) throw ParamError("scaling probe needs at least 3 sizes");
  if (seeds < 2) throw ParamError("scaling probe needs at least 2 seeds per size");

  constexpr double kClockFloorSeconds = 1e-5;

  ScalingProbeResult out;
  out.sizes.assign(sizes.begin(), sizes.end());
  out.median_seconds.reserve(sizes.size());

  EigOptions opts;
  opts.t_cap = std::max<std::int64_t>(t, 10);
  for (const std::int64_t n : sizes) {
    if (n < 2) throw ParamError("scaling probe sizes must be >= 2");
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(seeds));
    const double p = std::min(1.0, avg_degree / static_cast<double>(n - 1));
    for (std::int64_t s = 0; s < seeds; ++s) {
      const AttributedGraph data =
          generate_synthetic(n, 1, p, p, 1, static_cast<std::uint64_t>(s) + 1);
      const auto start = std::chrono::steady_clock::now();
      (void)top_eigenpairs(data.graph, std::min<std::int64_t>(t, n), opts);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    if (median < kClockFloorSeconds) {
      throw ParamError("timing for n=" + std::to_string(n) +
                       " is below clock resolution; use larger sizes");
    }
    out.median_seconds.push_back(median);
  }

  std::vector<double> xs(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) xs[i] = static_cast<double>(sizes[i]);
  out.slope = fit_loglog_slope(xs, out.median_seconds);
  return out;
}

std::string bench_rows_to_csv(std::span<const BenchRow> rows) {
  std::string out = "method,dataset,seed,t,auc,gap,train_s,eigen_s\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%llu,%lld,%.6f,%.6g,%.4f,%.4f\n", r.method.c_str(),
                  r.dataset.c_str(), static_cast<unsigned long long>(r.seed),
                  static_cast<long long>(r.t), r.auc, r.gap, r.train_s, r.eigen_s);
    out += buf;
  }
  return out;
}

}  // namespace neigad
