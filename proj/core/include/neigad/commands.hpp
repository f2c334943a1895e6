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
#include <iosfwd>
#include <string>
#include <vector>

#include "neigad/graph.hpp"
#include "neigad/models.hpp"

namespace neigad {

// Exit-code contract shared by all commands:
//   0 success, 2 configuration/parameter error, 3 numeric non-convergence or
//   divergence, 4 I/O or input-format error, 1 anything else.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

// Dataset source plus anomaly-injection settings. Exactly one of the
// synthetic block or graph_path may be set.
struct DatasetSpec {
  bool synthetic = false;
  std::int64_t n = 0;
  std::int64_t blocks = 4;
  double p_in = 0.02;
  double p_out = 0.002;
  std::int64_t d = 32;
  double feature_noise = 0.3;

  std::string graph_path;
  std::string features_path;
  std::string labels_path;

  std::int64_t inject_cliques = 0;
  std::int64_t inject_clique_size = 5;
  std::int64_t inject_contextual = 0;
  std::int64_t inject_context_pool = 50;

  std::string name;  // dataset column in batch CSVs
};

// Loads or generates the dataset and applies the injections. Injected labels
// are OR-combined with any labels loaded from disk.
AttributedGraph build_dataset(const DatasetSpec& spec, std::uint64_t seed);

struct RunConfig {
  DatasetSpec dataset;
  TrainConfig training;
  std::string out_dir;
};
RunConfig parse_run_config(std::string_view json_text);

struct BenchConfig {
  DatasetSpec dataset;
  std::vector<ModelKind> models;
  std::vector<std::uint64_t> seeds;
  TrainConfig training;  // seed/kind overridden per run; training.t is the augmented arm
  std::string out_dir;
};
BenchConfig parse_bench_config(std::string_view json_text);

struct EigArgs {
  std::string graph_path;
  std::int64_t t = 4;
  double tol = 1e-10;
  std::int64_t max_iter = 5000;
  std::string out_path;
};

// Commands print human-readable progress to `out`, errors to `err`, and
// return an exit code from the contract above.
int cmd_eig(const EigArgs& args, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_bench(const std::string& config_path, std::ostream& out, std::ostream& err);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace neigad
