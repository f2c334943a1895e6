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
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace neigad {

struct EvalReport {
  double roc_auc = std::numeric_limits<double>::quiet_NaN();
  double mean_anomalous = 0.0;
  double mean_normal = 0.0;
  double gap = 0.0;  // mean_anomalous - mean_normal
  double train_seconds = 0.0;
  double eigen_seconds = 0.0;
  std::uint64_t seed = 0;
};

std::string eval_report_to_json(const EvalReport& report);

// Probability that a random anomalous node outranks a random normal one,
// ties counted half (Mann-Whitney rank statistic). Requires both classes.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct ScoreGap {
  double mean_anomalous = 0.0;
  double mean_normal = 0.0;
  double gap = 0.0;
};
ScoreGap score_gap(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Rescales scores to [0, 1]; constant input maps to all zeros.
std::vector<double> min_max_normalize(std::span<const double> scores);

struct OverheadReport {
  double relative = 0.0;  // (eigen + train)_aug / train_vanilla - 1
  double vanilla_train_seconds = 0.0;
  double augmented_train_seconds = 0.0;
  double augmented_eigen_seconds = 0.0;
};
OverheadReport overhead_report(const EvalReport& vanilla, const EvalReport& augmented);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys);

struct ScalingProbeResult {
  std::vector<std::int64_t> sizes;
  std::vector<double> median_seconds;  // median over seeds per size
  double slope = 0.0;                  // log-log slope of time vs n
};

// Times the top-t eigensolver on random graphs of the given sizes at a fixed
// average degree and fits the growth exponent. Needs >= 3 sizes and >= 2
// seeds per size; timings must stay above the clock-resolution floor.
ScalingProbeResult scaling_probe(std::span<const std::int64_t> sizes, std::int64_t t,
                                 double avg_degree, std::int64_t seeds);

// One benchmark-harness run in the batch CSV layout
// "method,dataset,seed,t,auc,gap,train_s,eigen_s".
struct BenchRow {
  std::string method;
  std::string dataset;
  std::uint64_t seed = 0;
  std::int64_t t = 0;
  double auc = 0.0;
  double gap = 0.0;
  double train_s = 0.0;
  double eigen_s = 0.0;
};
std::string bench_rows_to_csv(std::span<const BenchRow> rows);

}  // namespace neigad
