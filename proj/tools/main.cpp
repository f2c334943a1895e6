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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "neigad/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"NeiGAD: spectral neighbor-information augmentation for graph anomaly detection"};
  app.require_subcommand(1);

  neigad::EigArgs eig_args;
  CLI::App* eig = app.add_subcommand("eig", "Top-t adjacency eigenpairs of a graph file");
  eig->add_option("--graph", eig_args.graph_path, "Edge-list or MatrixMarket file")->required();
  eig->add_option("--t", eig_args.t, "Number of eigenpairs");
  eig->add_option("--tol", eig_args.tol, "Residual tolerance");
  eig->add_option("--maxiter", eig_args.max_iter, "Lanczos step budget");
  eig->add_option("--out", eig_args.out_path, "Output CSV path")->required();

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Train and evaluate one detector from a JSON config");
  run->add_option("--config", run_config, "Run configuration JSON")->required();

  std::string bench_config;
  CLI::App* bench =
      app.add_subcommand("bench", "Vanilla-vs-augmented comparison over models and seeds");
  bench->add_option("--config", bench_config, "Benchmark configuration JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return neigad::kExitConfig;
  }

  if (eig->parsed()) return neigad::cmd_eig(eig_args, std::cout, std::cerr);
  if (run->parsed()) return neigad::cmd_run(run_config, std::cout, std::cerr);
  if (bench->parsed()) return neigad::cmd_bench(bench_config, std::cout, std::cerr);
  return neigad::kExitConfig;
}
