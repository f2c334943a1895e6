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

#include "neigad/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "neigad/error.hpp"
#include "neigad/rng.hpp"

namespace neigad {

namespace {

struct LineCursor {
  std::string_view text;
  std::size_t pos = 0;
  std::int64_t line_no = 0;

  // Next line, stripped of trailing '\r'; nullopt at end of input.
  std::optional<std::string_view> next() {
    if (pos >= text.size()) return std::nullopt;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t parse_int_token(std::string_view tok, std::int64_t line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": malformed integer token '" +
                     std::string(tok) + "'");
  }
  return value;
}

double parse_real_token(std::string_view tok, std::int64_t row, std::int64_t col) {
  const std::string s(tok);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": cannot parse '" + s + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": non-finite value");
  }
  return value;
}

// Draws `count` distinct nodes from [0, n) by partial Fisher-Yates.
std::vector<std::int64_t> sample_distinct(std::int64_t n, std::int64_t count, Rng& rng) {
  std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pool[i] = i;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t j = i + rng.uniform_int(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

SparseGraph SparseGraph::from_edges(
    std::int64_t n, std::span<const std::pair<std::int64_t, std::int64_t>> edges) {
  if (n < 0) throw ParamError("negative node count");
  SparseGraph g;
  g.n_ = n;
  std::vector<std::pair<std::int64_t, std::int64_t>> dir;
  dir.reserve(edges.size() * 2);
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n) {
      throw ParamError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") out of range for n=" + std::to_string(n));
    }
    if (i == j) continue;  // self-loops dropped
    dir.emplace_back(i, j);
    dir.emplace_back(j, i);
  }
  std::sort(dir.begin(), dir.end());
  dir.erase(std::unique(dir.begin(), dir.end()), dir.end());

  g.row_offsets_.assign(static_cast<std::size_t>(n + 1), 0);
  g.col_indices_.reserve(dir.size());
  for (const auto& [i, j] : dir) {
    ++g.row_offsets_[i + 1];
    g.col_indices_.push_back(j);
  }
  for (std::int64_t i = 0; i < n; ++i) g.row_offsets_[i + 1] += g.row_offsets_[i];
  return g;
}

bool SparseGraph::has_edge(std::int64_t i, std::int64_t j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

bool SparseGraph::is_symmetric() const {
  for (std::int64_t i = 0; i < n_; ++i) {
    for (std::int64_t j : neighbors(i)) {
      if (!has_edge(j, i)) return false;
    }
  }
  return true;
}

DenseMatrix SparseGraph::densify() const {
  if (n_ > 4096) {
    throw ParamError("refusing to densify a graph with n=" + std::to_string(n_) + " > 4096");
  }
  DenseMatrix a(n_, n_);
  for (std::int64_t i = 0; i < n_; ++i) {
    for (std::int64_t j : neighbors(i)) a(i, j) = 1.0;
  }
  return a;
}

void AttributedGraph::validate() const {
  if (features.rows() != graph.num_nodes()) {
    throw DimensionError("feature rows " + std::to_string(features.rows()) +
                         " != node count " + std::to_string(graph.num_nodes()));
  }
  if (!labels.empty() && static_cast<std::int64_t>(labels.size()) != graph.num_nodes()) {
    throw DimensionError("label count " + std::to_string(labels.size()) + " != node count " +
                         std::to_string(graph.num_nodes()));
  }
  if (!features.all_finite()) throw ParamError("features contain non-finite values");
}

SparseGraph parse_edge_list(std::string_view text, std::optional<std::int64_t> n) {
  LineCursor cursor{text};
  std::optional<std::int64_t> header_n;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::vector<std::int64_t> edge_lines;  // for range errors after n is known

  while (auto raw = cursor.next()) {
    std::string_view line = trim(*raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    if (line.starts_with("n=")) {
      header_n = parse_int_token(trim(line.substr(2)), cursor.line_no);
      continue;
    }
    const auto toks = split_ws(line);
    if (toks.size() != 2) {
      throw ParseError("line " + std::to_string(cursor.line_no) +
                       ": expected two node indices, got " + std::to_string(toks.size()) +
                       " tokens");
    }
    edges.emplace_back(parse_int_token(toks[0], cursor.line_no),
                       parse_int_token(toks[1], cursor.line_no));
    edge_lines.push_back(cursor.line_no);
  }

  if (n && header_n && *n != *header_n) {
    throw ParseError("header declares n=" + std::to_string(*header_n) +
                     " but caller supplied n=" + std::to_string(*n));
  }
  const std::optional<std::int64_t> node_count = n ? n : header_n;
  if (!node_count) {
    throw ParseError("node count missing: supply it or add a header line 'n=<int>'");
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [i, j] = edges[e];
    if (i < 0 || i >= *node_count || j < 0 || j >= *node_count) {
      throw ParseError("line " + std::to_string(edge_lines[e]) + ": node index out of range [0, " +
                       std::to_string(*node_count) + ")");
    }
  }
  return SparseGraph::from_edges(*node_count, edges);
}

SparseGraph parse_matrix_market(std::string_view text) {
  LineCursor cursor{text};
  const auto banner = cursor.next();
  if (!banner || !banner->starts_with("%%MatrixMarket")) {
    throw ParseError("missing %%MatrixMarket banner");
  }
  {
    const auto toks = split_ws(*banner);
    if (toks.size() < 3 || toks[1] != "matrix" || toks[2] != "coordinate") {
      throw ParseError("unsupported MatrixMarket header: expected 'matrix coordinate'");
    }
    for (std::size_t i = 3; i < toks.size(); ++i) {
      const std::string_view q = toks[i];
      if (q != "pattern" && q != "real" && q != "integer" && q != "symmetric" && q != "general") {
        throw ParseError("unsupported MatrixMarket qualifier '" + std::string(q) + "'");
      }
    }
  }

  std::optional<std::string_view> line;
  while ((line = cursor.next())) {
    const auto t = trim(*line);
    if (!t.empty() && t.front() != '%') break;
  }
  if (!line) throw ParseError("missing MatrixMarket size line");
  const auto size_toks = split_ws(trim(*line));
  if (size_toks.size() != 3) {
    throw ParseError("line " + std::to_string(cursor.line_no) + ": expected 'rows cols nnz'");
  }
  const std::int64_t rows = parse_int_token(size_toks[0], cursor.line_no);
  const std::int64_t cols = parse_int_token(size_toks[1], cursor.line_no);
  const std::int64_t nnz = parse_int_token(size_toks[2], cursor.line_no);
  if (rows != cols) {
    throw ParseError("adjacency matrix must be square, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(static_cast<std::size_t>(nnz));
  while (auto raw = cursor.next()) {
    const auto t = trim(*raw);
    if (t.empty() || t.front() == '%') continue;
    const auto toks = split_ws(t);
    if (toks.size() < 2) {
      throw ParseError("line " + std::to_string(cursor.line_no) + ": expected 'i j [value]'");
    }
    const std::int64_t i = parse_int_token(toks[0], cursor.line_no);
    const std::int64_t j = parse_int_token(toks[1], cursor.line_no);
    if (i < 1 || i > rows || j < 1 || j > rows) {
      throw ParseError("line " + std::to_string(cursor.line_no) +
                       ": 1-based index out of range [1, " + std::to_string(rows) + "]");
    }
    edges.emplace_back(i - 1, j - 1);
  }
  if (static_cast<std::int64_t>(edges.size()) != nnz) {
    throw ParseError("entry count " + std::to_string(edges.size()) +
                     " does not match declared nnz " + std::to_string(nnz));
  }
  return SparseGraph::from_edges(rows, edges);
}

FeatureMatrix load_features_csv(std::string_view text) {
  LineCursor cursor{text};
  std::vector<double> values;
  std::int64_t rows = 0;
  std::int64_t cols = -1;
  while (auto raw = cursor.next()) {
    const std::string_view line = *raw;
    if (trim(line).empty()) continue;
    ++rows;
    std::int64_t col = 0;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      const std::string_view cell =
          line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
      ++col;
      values.push_back(parse_real_token(trim(cell), rows, col));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw ParseError("ragged row " + std::to_string(rows) + ": expected " +
                       std::to_string(cols) + " columns, got " + std::to_string(col));
    }
  }
  if (rows == 0) throw ParseError("empty feature table");
  return FeatureMatrix(rows, cols, std::move(values));
}

std::vector<std::uint8_t> parse_labels(std::string_view text) {
  LineCursor cursor{text};
  std::vector<std::uint8_t> labels;
  while (auto raw = cursor.next()) {
    const std::string_view line = trim(*raw);
    if (line.empty()) continue;
    if (line == "0") {
      labels.push_back(0);
    } else if (line == "1") {
      labels.push_back(1);
    } else {
      throw ParseError("line " + std::to_string(cursor.line_no) + ": label must be 0 or 1, got '" +
                       std::string(line) + "'");
    }
  }
  return labels;
}

SparseOperator normalized_adjacency(const SparseGraph& g) {
  const std::int64_t n = g.num_nodes();
  std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
  }

  SparseOperator op;
  op.rows = op.cols = n;
  op.row_offsets.assign(static_cast<std::size_t>(n + 1), 0);
  op.col_indices.reserve(static_cast<std::size_t>(g.num_entries() + n));
  op.values.reserve(static_cast<std::size_t>(g.num_entries() + n));
  for (std::int64_t i = 0; i < n; ++i) {
    bool diag_done = false;
    for (std::int64_t j : g.neighbors(i)) {
      if (!diag_done && j > i) {  // keep columns sorted while inserting the diagonal
        op.col_indices.push_back(i);
        op.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        diag_done = true;
      }
      op.col_indices.push_back(j);
      op.values.push_back(inv_sqrt[i] * inv_sqrt[j]);
    }
    if (!diag_done) {
      op.col_indices.push_back(i);
      op.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
    }
    op.row_offsets[i + 1] = static_cast<std::int64_t>(op.col_indices.size());
  }
  return op;
}

StructuralInjection inject_structural_anomalies(const SparseGraph& g, std::int64_t clique_count,
                                                std::int64_t clique_size, std::uint64_t seed) {
  const std::int64_t n = g.num_nodes();
  if (clique_count < 0) throw ParamError("clique count must be nonnegative");
  if (clique_count > 0 && clique_size < 2) throw ParamError("clique size must be at least 2");
  if (clique_count * clique_size > n) {
    throw ParamError("clique nodes " + std::to_string(clique_count * clique_size) +
                     " exceed node count " + std::to_string(n));
  }

  StructuralInjection out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  if (clique_count == 0) {
    out.graph = g;
    return out;
  }

  Rng rng = Rng::stream(seed, "injection-structural");
  const auto chosen = sample_distinct(n, clique_count * clique_size, rng);

  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  edges.reserve(static_cast<std::size_t>(g.num_entries() / 2) +
                static_cast<std::size_t>(clique_count * clique_size * clique_size));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j : g.neighbors(i)) {
      if (i < j) edges.emplace_back(i, j);
    }
  }
  const std::int64_t before = static_cast<std::int64_t>(edges.size());
  for (std::int64_t c = 0; c < clique_count; ++c) {
    for (std::int64_t a = 0; a < clique_size; ++a) {
      const std::int64_t u = chosen[c * clique_size + a];
      out.labels[u] = 1;
      for (std::int64_t b = a + 1; b < clique_size; ++b) {
        const std::int64_t v = chosen[c * clique_size + b];
        edges.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  out.graph = SparseGraph::from_edges(n, edges);
  out.added_edges = out.graph.num_undirected_edges() - before;
  return out;
}

ContextualInjection inject_contextual_anomalies(const FeatureMatrix& x, std::int64_t target_count,
                                                std::int64_t pool_size, std::uint64_t seed) {
  const std::int64_t n = x.rows();
  if (target_count < 0) throw ParamError("target count must be nonnegative");
  if (target_count > n) {
    throw ParamError("target count " + std::to_string(target_count) + " exceeds node count " +
                     std::to_string(n));
  }
  if (target_count > 0 && pool_size < 1) throw ParamError("candidate pool must be at least 1");

  ContextualInjection out;
  out.features = x;  // replacement rows are read from the original `x`
  out.labels.assign(static_cast<std::size_t>(n), 0);
  if (target_count == 0) return out;

  Rng rng = Rng::stream(seed, "injection-contextual");
  const auto targets = sample_distinct(n, target_count, rng);
  const std::int64_t k = std::min<std::int64_t>(pool_size, n - 1);

  for (const std::int64_t target : targets) {
    out.labels[target] = 1;
    // k distinct candidates drawn from all nodes except the target
    std::vector<std::int64_t> candidates = sample_distinct(n - 1, k, rng);
    double best_dist = -1.0;
    std::int64_t best = target;
    for (std::int64_t cand : candidates) {
      if (cand >= target) ++cand;  // skip over the target's own index
      double dist = 0.0;
      const auto a = x.row(target);
      const auto b = x.row(cand);
      for (std::int64_t j = 0; j < x.cols(); ++j) {
        const double diff = a[j] - b[j];
        dist += diff * diff;
      }
      if (dist > best_dist) {
        best_dist = dist;
        best = cand;
      }
    }
    const auto src = x.row(best);
    const auto dst = out.features.row(target);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

AttributedGraph generate_synthetic(std::int64_t n, std::int64_t blocks, double p_in, double p_out,
                                   std::int64_t d, std::uint64_t seed, double feature_noise) {
  if (n < 1) throw ParamError("node count must be positive");
  if (blocks < 1 || blocks > n) throw ParamError("block count must be in [1, n]");
  if (d < 1) throw ParamError("feature dimension must be positive");
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
    throw ParamError("edge probabilities must satisfy 0 <= p_out <= p_in <= 1");
  }

  // Contiguous block assignment: node i belongs to block i * blocks / n.
  const auto block_of = [&](std::int64_t i) { return i * blocks / n; };

  Rng edge_rng = Rng::stream(seed, "synthetic-edges");
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double p = block_of(i) == block_of(j) ? p_in : p_out;
      if (p > 0.0 && edge_rng.uniform() < p) edges.emplace_back(i, j);
    }
  }

  Rng feat_rng = Rng::stream(seed, "synthetic-features");
  std::vector<double> means(static_cast<std::size_t>(blocks * d));
  for (double& m : means) m = feat_rng.normal();
  FeatureMatrix features(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t b = block_of(i);
    for (std::int64_t j = 0; j < d; ++j) {
      features(i, j) = means[b * d + j] + feature_noise * feat_rng.normal();
    }
  }

  AttributedGraph out;
  out.graph = SparseGraph::from_edges(n, edges);
  out.features = std::move(features);
  return out;
}

}  // namespace neigad
