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

#include "neigad/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "neigad/error.hpp"
#include "neigad/eval.hpp"
#include "neigad/spectral.hpp"

namespace neigad {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DivergenceError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const ParseError*>(&e)) return kExitIo;
  if (dynamic_cast<const ParamError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DimensionError*>(&e)) return kExitConfig;
  return 1;
}

json parse_json_object(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "config must be a JSON object");
  return j;
}

// Field extraction with "unknown keys are hard errors" semantics: every
// reader marks its key as consumed; leftovers fail validation.
class ConfigReader {
 public:
  explicit ConfigReader(const json& j) : j_(j) {}

  bool has(const std::string& key) {
    consumed_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  T require(const std::string& key) {
    consumed_.insert(key);
    if (!j_.contains(key)) throw ConfigError(key, "missing required field");
    return convert<T>(key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    consumed_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!consumed_.contains(key)) throw ConfigError(key, "unknown key");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(key, "wrong type");
    }
  }

  const json& j_;
  std::set<std::string> consumed_;
};

void check_path_exists(const std::string& field, const std::string& path) {
  if (!fs::exists(path)) throw ConfigError(field, "file not found: " + path);
}

DatasetSpec read_dataset_spec(ConfigReader& reader) {
  DatasetSpec spec;
  const bool has_synthetic = reader.has("synthetic_n");
  const bool has_files = reader.has("graph_path");
  if (has_synthetic == has_files) {
    throw ConfigError("synthetic_n",
                      "exactly one dataset source is required: synthetic_n or graph_path");
  }
  if (has_synthetic) {
    spec.synthetic = true;
    spec.n = reader.require<std::int64_t>("synthetic_n");
    spec.blocks = reader.get_or<std::int64_t>("synthetic_blocks", spec.blocks);
    spec.p_in = reader.get_or<double>("synthetic_p_in", spec.p_in);
    spec.p_out = reader.get_or<double>("synthetic_p_out", spec.p_out);
    spec.d = reader.get_or<std::int64_t>("synthetic_d", spec.d);
    spec.feature_noise = reader.get_or<double>("synthetic_feature_noise", spec.feature_noise);
    if (spec.n < 1) throw ConfigError("synthetic_n", "must be positive");
    if (spec.blocks < 1) throw ConfigError("synthetic_blocks", "must be positive");
    if (spec.d < 1) throw ConfigError("synthetic_d", "must be positive");
    if (!(spec.p_out >= 0.0 && spec.p_out <= spec.p_in && spec.p_in <= 1.0)) {
      throw ConfigError("synthetic_p_in", "need 0 <= synthetic_p_out <= synthetic_p_in <= 1");
    }
    spec.name = "sbm_n" + std::to_string(spec.n);
  } else {
    spec.graph_path = reader.require<std::string>("graph_path");
    spec.features_path = reader.require<std::string>("features_path");
    spec.labels_path = reader.get_or<std::string>("labels_path", "");
    check_path_exists("graph_path", spec.graph_path);
    check_path_exists("features_path", spec.features_path);
    if (!spec.labels_path.empty()) check_path_exists("labels_path", spec.labels_path);
    spec.name = fs::path(spec.graph_path).stem().string();
  }
  spec.inject_cliques = reader.get_or<std::int64_t>("inject_cliques", 0);
  spec.inject_clique_size = reader.get_or<std::int64_t>("inject_clique_size", 5);
  spec.inject_contextual = reader.get_or<std::int64_t>("inject_contextual", 0);
  spec.inject_context_pool = reader.get_or<std::int64_t>("inject_context_pool", 50);
  if (spec.inject_cliques < 0) throw ConfigError("inject_cliques", "must be nonnegative");
  if (spec.inject_cliques > 0 && spec.inject_clique_size < 2) {
    throw ConfigError("inject_clique_size", "must be at least 2");
  }
  if (spec.inject_contextual < 0) throw ConfigError("inject_contextual", "must be nonnegative");
  if (spec.inject_contextual > 0 && spec.inject_context_pool < 1) {
    throw ConfigError("inject_context_pool", "must be at least 1");
  }
  return spec;
}

TrainConfig read_train_config(ConfigReader& reader, bool with_model, bool with_seed) {
  TrainConfig config;
  if (with_model) {
    config.kind = model_kind_from_string(reader.require<std::string>("model"));
  }
  config.alpha = reader.get_or<double>("alpha", config.alpha);
  config.learning_rate = reader.get_or<double>("learning_rate", config.learning_rate);
  config.epochs = reader.get_or<std::int64_t>("epochs", config.epochs);
  config.hidden = reader.get_or<std::int64_t>("hidden", config.hidden);
  config.embed = reader.get_or<std::int64_t>("embedding", config.embed);
  config.t = reader.get_or<std::int64_t>("t", config.t);
  config.eigen_scale = reader.get_or<double>("eigen_scale", config.eigen_scale);
  config.eigen_tol = reader.get_or<double>("eigen_tol", config.eigen_tol);
  if (with_seed) {
    config.seed = reader.get_or<std::uint64_t>("seed", 1);
  }
  try {
    config.validate();
  } catch (const ParamError& e) {
    // Surface the offending field name for the exit-2 contract.
    const std::string msg = e.what();
    const auto space = msg.find(' ');
    throw ConfigError(msg.substr(0, space), msg);
  }
  return config;
}

std::int64_t worker_pool_size(std::size_t jobs) {
  const char* env = std::getenv("NEIGAD_THREADS");
  std::int64_t cap = 1;
  if (env != nullptr) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) cap = parsed;
  }
  return std::min<std::int64_t>(cap, static_cast<std::int64_t>(jobs));
}

SparseGraph load_graph_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (text.starts_with("%%MatrixMarket")) return parse_matrix_market(text);
  return parse_edge_list(text);
}

json run_report_json(const RunConfig& config, const AttributedGraph& data,
                     const TrainResult& result) {
  nlohmann::ordered_json j;
  j["model"] = to_string(config.training.kind);
  j["dataset"] = config.dataset.name;
  j["n"] = data.graph.num_nodes();
  j["d"] = data.features.cols();
  j["seed"] = config.training.seed;
  j["t"] = config.training.t;
  j["alpha"] = result.scores.alpha;
  j["epochs"] = config.training.epochs;
  j["final_loss"] = result.loss_history.back();
  if (data.has_labels()) {
    j["roc_auc"] = roc_auc(result.scores.score, data.labels);
    const ScoreGap sg = score_gap(result.scores.score, data.labels);
    j["mean_anomalous"] = sg.mean_anomalous;
    j["mean_normal"] = sg.mean_normal;
    j["gap"] = sg.gap;
  } else {
    j["roc_auc"] = nullptr;
  }
  j["train_seconds"] = result.scores.train_seconds;
  if (config.training.t > 0) j["eigen_seconds"] = result.scores.eigen_seconds;
  return j;
}

struct BenchJob {
  ModelKind kind;
  std::uint64_t seed = 0;
};

struct BenchOutcome {
  BenchJob job;
  std::string status = "ok";
  ComparisonReport report;
};

std::string format_double(double v, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(path, "write failed");
}

AttributedGraph build_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  AttributedGraph data;
  if (spec.synthetic) {
    data = generate_synthetic(spec.n, spec.blocks, spec.p_in, spec.p_out, spec.d, seed,
                              spec.feature_noise);
  } else {
    data.graph = load_graph_file(spec.graph_path);
    data.features = load_features_csv(read_text_file(spec.features_path));
    if (!spec.labels_path.empty()) {
      data.labels = parse_labels(read_text_file(spec.labels_path));
    }
    data.validate();
  }

  std::vector<std::uint8_t> labels = data.labels;
  if (labels.empty()) labels.assign(static_cast<std::size_t>(data.graph.num_nodes()), 0);

  bool injected = false;
  if (spec.inject_cliques > 0) {
    StructuralInjection s =
        inject_structural_anomalies(data.graph, spec.inject_cliques, spec.inject_clique_size,
                                    seed);
    data.graph = std::move(s.graph);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] |= s.labels[i];
    injected = true;
  }
  if (spec.inject_contextual > 0) {
    ContextualInjection c = inject_contextual_anomalies(data.features, spec.inject_contextual,
                                                        spec.inject_context_pool, seed);
    data.features = std::move(c.features);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] |= c.labels[i];
    injected = true;
  }
  if (injected || !data.labels.empty()) data.labels = std::move(labels);
  data.validate();
  return data;
}

RunConfig parse_run_config(std::string_view json_text) {
  const json j = parse_json_object(json_text);
  ConfigReader reader(j);
  RunConfig config;
  config.dataset = read_dataset_spec(reader);
  config.training = read_train_config(reader, /*with_model=*/true, /*with_seed=*/true);
  config.out_dir = reader.require<std::string>("out_dir");
  reader.finish();
  return config;
}

BenchConfig parse_bench_config(std::string_view json_text) {
  const json j = parse_json_object(json_text);
  ConfigReader reader(j);
  BenchConfig config;
  config.dataset = read_dataset_spec(reader);

  const auto model_names = reader.require<std::vector<std::string>>("models");
  if (model_names.empty()) throw ConfigError("models", "need at least one model");
  for (const auto& name : model_names) config.models.push_back(model_kind_from_string(name));

  config.seeds = reader.require<std::vector<std::uint64_t>>("seeds");
  if (config.seeds.empty()) throw ConfigError("seeds", "need at least one seed");

  config.training = read_train_config(reader, /*with_model=*/false, /*with_seed=*/false);
  if (config.training.t < 1) {
    throw ConfigError("t", "benchmark needs t >= 1 for the augmented arm");
  }
  config.out_dir = reader.require<std::string>("out_dir");
  reader.finish();
  return config;
}

int cmd_eig(const EigArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.t < 1) throw ParamError("t must be at least 1");
    if (!(args.tol > 0.0)) throw ParamError("tol must be positive");
    const SparseGraph graph = load_graph_file(args.graph_path);

    EigOptions opts;
    opts.tol = args.tol;
    opts.max_iter = args.max_iter;
    opts.t_cap = std::max<std::int64_t>(args.t, 10);
    const EigenPairs pairs = top_eigenpairs(graph, args.t, opts);
    write_text_file(args.out_path, eigenpairs_to_csv(pairs));

    const NeighborAverageReport report = neighbor_average_residual(graph, pairs);
    std::int64_t skipped = 0;
    for (std::uint8_t s : report.skipped) skipped += s;
    out << "eigenvalues:";
    for (std::int64_t k = 0; k < pairs.t; ++k) out << ' ' << pairs.eigenvalues[k];
    out << "\nmax solver residual: " << *std::max_element(pairs.residuals.begin(),
                                                          pairs.residuals.end())
        << "\nmax neighbor-average residual: " << report.max_residual() << " (" << skipped
        << " pair(s) skipped for |lambda| < 1e-6)\nwrote " << args.out_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_run_config(read_text_file(config_path));
    fs::create_directories(config.out_dir);

    const AttributedGraph data = build_dataset(config.dataset, config.training.seed);
    const TrainResult result = train(data, config.training);

    const json report = run_report_json(config, data, result);
    write_text_file((fs::path(config.out_dir) / "report.json").string(), report.dump(2) + "\n");
    write_text_file((fs::path(config.out_dir) / "scores.csv").string(),
                    scores_to_csv(result.scores, data.labels));
    write_text_file((fs::path(config.out_dir) / "model.json").string(),
                    params_to_json(result.params));

    out << "model " << to_string(config.training.kind) << " on " << config.dataset.name
        << ": final loss " << result.loss_history.back();
    if (report.contains("roc_auc") && !report["roc_auc"].is_null()) {
      out << ", roc_auc " << report["roc_auc"].get<double>();
    }
    out << "\nartifacts in " << config.out_dir << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

int cmd_bench(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const BenchConfig config = parse_bench_config(read_text_file(config_path));
    fs::create_directories(config.out_dir);

    std::vector<BenchJob> jobs;
    for (ModelKind kind : config.models) {
      for (std::uint64_t seed : config.seeds) jobs.push_back({kind, seed});
    }
    std::vector<BenchOutcome> outcomes(jobs.size());

    const auto run_job = [&](std::size_t idx) {
      BenchOutcome& outcome = outcomes[idx];
      outcome.job = jobs[idx];
      try {
        const AttributedGraph data = build_dataset(config.dataset, jobs[idx].seed);
        TrainConfig vanilla = config.training;
        vanilla.kind = jobs[idx].kind;
        vanilla.seed = jobs[idx].seed;
        vanilla.t = 0;
        TrainConfig augmented = vanilla;
        augmented.t = config.training.t;
        outcome.report = run_comparison(data, vanilla, augmented);
      } catch (const std::exception& e) {
        outcome.status = std::string("error: ") + e.what();
      }
    };

    const std::int64_t pool = worker_pool_size(jobs.size());
    if (pool <= 1) {
      for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> workers;
      workers.reserve(static_cast<std::size_t>(pool));
      for (std::int64_t w = 0; w < pool; ++w) {
        workers.emplace_back([&] {
          while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            run_job(idx);
          }
        });
      }
      for (auto& worker : workers) worker.join();
    }

    // Comparison table: one detail row per (model, seed), then one aggregate
    // row of means per model.
    std::string csv =
        "method,seed,status,auc_vanilla,auc_neigad,delta,gap_vanilla,gap_neigad,"
        "train_vanilla_s,train_neigad_s,eigen_s\n";
    std::vector<BenchRow> long_rows;
    for (ModelKind kind : config.models) {
      double sum_delta = 0, sum_v = 0, sum_a = 0;
      std::int64_t ok_count = 0;
      for (const BenchOutcome& outcome : outcomes) {
        if (outcome.job.kind != kind) continue;
        const std::string method = to_string(kind);
        if (outcome.status != "ok") {
          std::string status = outcome.status;
          for (char& ch : status) {
            if (ch == ',' || ch == '\n') ch = ';';
          }
          csv += method + "," + std::to_string(outcome.job.seed) + "," + status + ",,,,,,,,\n";
          continue;
        }
        const ComparisonReport& r = outcome.report;
        csv += method + "," + std::to_string(outcome.job.seed) + ",ok," +
               format_double(r.vanilla.roc_auc) + "," + format_double(r.augmented.roc_auc) +
               "," + format_double(r.delta) + "," + format_double(r.vanilla.gap, "%.6g") + "," +
               format_double(r.augmented.gap, "%.6g") + "," +
               format_double(r.vanilla.train_seconds, "%.4f") + "," +
               format_double(r.augmented.train_seconds, "%.4f") + "," +
               format_double(r.augmented.eigen_seconds, "%.4f") + "\n";
        sum_delta += r.delta;
        sum_v += r.vanilla.roc_auc;
        sum_a += r.augmented.roc_auc;
        ++ok_count;
        long_rows.push_back({method, config.dataset.name, outcome.job.seed, 0,
                             r.vanilla.roc_auc, r.vanilla.gap, r.vanilla.train_seconds, 0.0});
        long_rows.push_back({method + "+neigad", config.dataset.name, outcome.job.seed,
                             config.training.t, r.augmented.roc_auc, r.augmented.gap,
                             r.augmented.train_seconds, r.augmented.eigen_seconds});
      }
      if (ok_count > 0) {
        const double inv = 1.0 / static_cast<double>(ok_count);
        csv += to_string(kind) + ",mean,ok," + format_double(sum_v * inv) + "," +
               format_double(sum_a * inv) + "," + format_double(sum_delta * inv) + ",,,,,\n";
      } else {
        csv += to_string(kind) + ",mean,error: no successful runs,,,,,,,,\n";
      }
    }

    const std::string table_path = (fs::path(config.out_dir) / "bench_comparison.csv").string();
    write_text_file(table_path, csv);
    write_text_file((fs::path(config.out_dir) / "bench_runs.csv").string(),
                    bench_rows_to_csv(long_rows));
    out << csv;
    out << "wrote " << table_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return exit_code_for(e, err);
  }
}

}  // namespace neigad
