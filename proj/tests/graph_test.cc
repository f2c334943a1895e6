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

#include <cmath>

#include "gtest/gtest.h"
#include "neigad/error.hpp"
#include "neigad/spectral.hpp"
#include "test_support.hpp"

namespace neigad {
namespace {

using testing::k2;
using testing::p3;
using testing::random_graph;

TEST(ParseEdgeList, BuildsPathGraph) {
  const SparseGraph g = parse_edge_list("0 1\n1 2", 3);
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.degree(0), 1);
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.degree(2), 1);
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(ParseEdgeList, EmptyInputGivesEmptyGraph) {
  const SparseGraph g = parse_edge_list("", 2);
  EXPECT_EQ(g.num_nodes(), 2);
  EXPECT_EQ(g.num_undirected_edges(), 0);
  EXPECT_EQ(g.row_offsets(), (std::vector<std::int64_t>{0, 0, 0}));
}

TEST(ParseEdgeList, DeduplicatesAndSymmetrizes) {
  const SparseGraph g = parse_edge_list("0 1\n1 0\n0 1", 2);
  EXPECT_EQ(g.num_undirected_edges(), 1);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(ParseEdgeList, DropsSelfLoops) {
  const SparseGraph g = parse_edge_list("0 0\n0 1", 2);
  EXPECT_EQ(g.num_undirected_edges(), 1);
  EXPECT_FALSE(g.has_edge(0, 0));
}

TEST(ParseEdgeList, HeaderAndComments) {
  const SparseGraph g = parse_edge_list("# a path\nn=3\n0 1\n1 2  # tail comment\n");
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.num_undirected_edges(), 2);
}

TEST(ParseEdgeList, HeaderConflictsWithArgument) {
  EXPECT_THROW(parse_edge_list("n=4\n0 1", 3), ParseError);
}

TEST(ParseEdgeList, MissingNodeCount) {
  EXPECT_THROW(parse_edge_list("0 1"), ParseError);
}

TEST(ParseEdgeList, OutOfRangeNamesLine) {
  try {
    parse_edge_list("0 1\n1 7", 3);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseEdgeList, MalformedToken) {
  EXPECT_THROW(parse_edge_list("0 x", 2), ParseError);
  EXPECT_THROW(parse_edge_list("0 1 2", 3), ParseError);
}

TEST(ParseMatrixMarket, PatternSymmetric) {
  const SparseGraph g = parse_matrix_market(
      "%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n3 3 2\n1 2\n2 3\n");
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(ParseMatrixMarket, RealValuesIgnored) {
  const SparseGraph g = parse_matrix_market(
      "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 0.5\n2 1 0.5\n");
  EXPECT_EQ(g.num_undirected_edges(), 1);
}

TEST(ParseMatrixMarket, Errors) {
  EXPECT_THROW(parse_matrix_market("1 2\n"), ParseError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2 0\n"),
               ParseError);
  EXPECT_THROW(
      parse_matrix_market("%%MatrixMarket matrix coordinate pattern symmetric\n3 2 1\n1 2\n"),
      ParseError);
  EXPECT_THROW(
      parse_matrix_market("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n1 2\n"),
      ParseError);
  EXPECT_THROW(
      parse_matrix_market("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n1 4\n"),
      ParseError);
}

TEST(LoadFeaturesCsv, ParsesRectangularTable) {
  const FeatureMatrix m = load_features_csv("1,0\n0,1");
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(1, 1), 1.0);
}

TEST(LoadFeaturesCsv, SingleCell) {
  const FeatureMatrix m = load_features_csv("3.5");
  EXPECT_EQ(m.rows(), 1);
  EXPECT_EQ(m.cols(), 1);
  EXPECT_EQ(m(0, 0), 3.5);
}

TEST(LoadFeaturesCsv, RaggedRowFails) {
  EXPECT_THROW(load_features_csv("1,2\n3"), ParseError);
}

TEST(LoadFeaturesCsv, NonNumericCellNamesPosition) {
  try {
    load_features_csv("1,2\n3,oops");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos);
    EXPECT_NE(msg.find("column 2"), std::string::npos);
  }
}

TEST(LoadFeaturesCsv, EmptyFails) { EXPECT_THROW(load_features_csv(""), ParseError); }

TEST(ParseLabels, ZeroOnePerLine) {
  EXPECT_EQ(parse_labels("0\n1\n1\n"), (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_THROW(parse_labels("2\n"), ParseError);
}

TEST(NormalizedAdjacency, K2AllEntriesHalf) {
  const SparseOperator op = normalized_adjacency(k2());
  const DenseMatrix m = op.densify();
  for (std::int64_t i = 0; i < 2; ++i) {
    for (std::int64_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(m(i, j), 0.5);
  }
}

TEST(NormalizedAdjacency, IsolatedNodeGetsUnitDiagonal) {
  const SparseGraph g = SparseGraph::from_edges(3, std::vector<std::pair<std::int64_t,
                                                std::int64_t>>{{0, 1}});
  const DenseMatrix m = normalized_adjacency(g).densify();
  EXPECT_DOUBLE_EQ(m(2, 2), 1.0);
  EXPECT_DOUBLE_EQ(m(2, 0), 0.0);
}

TEST(NormalizedAdjacency, PathCenterEndEntry) {
  // Dense reference of D̃^{-1/2}(A+I)D̃^{-1/2} for the 3-node path.
  const DenseMatrix a = p3().densify();
  DenseMatrix ref(3, 3);
  std::vector<double> deg(3);
  for (int i = 0; i < 3; ++i) {
    double d = 1.0;
    for (int j = 0; j < 3; ++j) d += a(i, j);
    deg[i] = d;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double aij = i == j ? 1.0 : a(i, j);
      ref(i, j) = aij / std::sqrt(deg[i] * deg[j]);
    }
  }
  const DenseMatrix got = normalized_adjacency(p3()).densify();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(got(i, j), ref(i, j), 1e-15);
  }
  EXPECT_NEAR(got(1, 0), 1.0 / std::sqrt(6.0), 1e-12);
}

TEST(NormalizedAdjacency, SpectralRadiusAtMostOne) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const SparseGraph g = random_graph(48, 0.1, seed);
    const DenseEig eig = dense_sym_eig(normalized_adjacency(g).densify());
    for (double lambda : eig.values) EXPECT_LE(std::abs(lambda), 1.0 + 1e-12);
  }
}

TEST(InjectStructural, CliqueOnEdgelessGraph) {
  const SparseGraph g = SparseGraph::from_edges(
      10, std::vector<std::pair<std::int64_t, std::int64_t>>{});
  const StructuralInjection out = inject_structural_anomalies(g, 1, 3, 7);
  EXPECT_EQ(out.added_edges, 3);
  EXPECT_EQ(out.graph.num_undirected_edges(), 3);
  std::int64_t anomalous = 0;
  for (std::uint8_t l : out.labels) anomalous += l;
  EXPECT_EQ(anomalous, 3);
}

TEST(InjectStructural, ZeroCountIsIdentity) {
  const SparseGraph g = random_graph(20, 0.2, 5);
  const StructuralInjection out = inject_structural_anomalies(g, 0, 5, 7);
  EXPECT_TRUE(out.graph == g);
  for (std::uint8_t l : out.labels) EXPECT_EQ(l, 0);
}

TEST(InjectStructural, DeterministicGivenSeed) {
  const SparseGraph g = random_graph(30, 0.1, 5);
  const StructuralInjection a = inject_structural_anomalies(g, 2, 4, 42);
  const StructuralInjection b = inject_structural_anomalies(g, 2, 4, 42);
  EXPECT_TRUE(a.graph == b.graph);
  EXPECT_EQ(a.labels, b.labels);
  const StructuralInjection c = inject_structural_anomalies(g, 2, 4, 43);
  EXPECT_FALSE(a.labels == c.labels);
}

TEST(InjectStructural, NeverRemovesEdges) {
  const SparseGraph g = random_graph(40, 0.15, 9);
  const StructuralInjection out = inject_structural_anomalies(g, 3, 5, 11);
  for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
    for (std::int64_t j : g.neighbors(i)) EXPECT_TRUE(out.graph.has_edge(i, j));
  }
  EXPECT_TRUE(out.graph.is_symmetric());
}

TEST(InjectStructural, ParameterErrors) {
  const SparseGraph g = random_graph(10, 0.2, 1);
  EXPECT_THROW(inject_structural_anomalies(g, 4, 3, 1), ParamError);
  EXPECT_THROW(inject_structural_anomalies(g, 1, 1, 1), ParamError);
}

TEST(InjectContextual, ZeroCountIsIdentity) {
  const FeatureMatrix x = testing::random_matrix(8, 3, 2);
  const ContextualInjection out = inject_contextual_anomalies(x, 0, 5, 3);
  EXPECT_TRUE(out.features == x);
}

TEST(InjectContextual, TwoNodesForcedChoice) {
  FeatureMatrix x(2, 2);
  x(0, 0) = 1.0;
  x(1, 0) = -5.0;
  x(1, 1) = 2.0;
  const ContextualInjection out = inject_contextual_anomalies(x, 1, 1, 3);
  std::int64_t target = out.labels[0] ? 0 : 1;
  const std::int64_t other = 1 - target;
  for (std::int64_t j = 0; j < 2; ++j) EXPECT_EQ(out.features(target, j), x(other, j));
  for (std::int64_t j = 0; j < 2; ++j) EXPECT_EQ(out.features(other, j), x(other, j));
}

TEST(InjectContextual, ExtremeRowIsAlwaysTheSource) {
  // One far-away row must win every full-pool distance contest.
  const std::int64_t n = 6;
  FeatureMatrix x(n, 2);
  for (std::int64_t i = 0; i < n; ++i) x(i, 0) = static_cast<double>(i) * 0.01;
  x(5, 0) = 1000.0;
  x(5, 1) = -1000.0;
  const ContextualInjection out = inject_contextual_anomalies(x, 3, n - 1, 99);
  for (std::int64_t i = 0; i < n; ++i) {
    if (!out.labels[i] || i == 5) continue;
    EXPECT_EQ(out.features(i, 0), x(5, 0));
    EXPECT_EQ(out.features(i, 1), x(5, 1));
  }
}

TEST(InjectContextual, ReplacedRowsComeFromOriginal) {
  const FeatureMatrix x = testing::random_matrix(12, 4, 8);
  const ContextualInjection out = inject_contextual_anomalies(x, 5, 6, 17);
  std::int64_t replaced = 0;
  for (std::int64_t i = 0; i < x.rows(); ++i) {
    if (!out.labels[i]) continue;
    ++replaced;
    bool matches_original_row = false;
    for (std::int64_t s = 0; s < x.rows(); ++s) {
      if (s == i) continue;
      bool eq = true;
      for (std::int64_t j = 0; j < x.cols(); ++j) eq = eq && out.features(i, j) == x(s, j);
      matches_original_row = matches_original_row || eq;
    }
    EXPECT_TRUE(matches_original_row) << "row " << i;
  }
  EXPECT_EQ(replaced, 5);
}

TEST(InjectContextual, CountBeyondNodesFails) {
  const FeatureMatrix x = testing::random_matrix(4, 2, 1);
  EXPECT_THROW(inject_contextual_anomalies(x, 5, 2, 1), ParamError);
}

TEST(GenerateSynthetic, ExtremeProbabilitiesAreDeterministic) {
  const AttributedGraph g = generate_synthetic(4, 2, 1.0, 0.0, 3, 11);
  EXPECT_EQ(g.graph.num_undirected_edges(), 2);
  EXPECT_TRUE(g.graph.has_edge(0, 1));
  EXPECT_TRUE(g.graph.has_edge(2, 3));
  EXPECT_FALSE(g.graph.has_edge(1, 2));

  const AttributedGraph empty = generate_synthetic(12, 3, 0.0, 0.0, 2, 11);
  EXPECT_EQ(empty.graph.num_undirected_edges(), 0);
}

TEST(GenerateSynthetic, WithinBlockDensityMatchesProbability) {
  const std::int64_t n = 40, blocks = 2;
  double density_sum = 0.0;
  std::int64_t samples = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const AttributedGraph g = generate_synthetic(n, blocks, 0.3, 0.0, 2, seed);
    std::int64_t within_edges = 0, within_pairs = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = i + 1; j < n; ++j) {
        if (i * blocks / n != j * blocks / n) continue;
        ++within_pairs;
        within_edges += g.graph.has_edge(i, j) ? 1 : 0;
      }
    }
    density_sum += static_cast<double>(within_edges) / static_cast<double>(within_pairs);
    ++samples;
  }
  EXPECT_NEAR(density_sum / static_cast<double>(samples), 0.3, 0.05);
}

TEST(GenerateSynthetic, InvariantsAndDeterminism) {
  const AttributedGraph a = generate_synthetic(64, 4, 0.2, 0.02, 5, 3);
  const AttributedGraph b = generate_synthetic(64, 4, 0.2, 0.02, 5, 3);
  EXPECT_TRUE(a.graph == b.graph);
  EXPECT_TRUE(a.features == b.features);
  EXPECT_TRUE(a.graph.is_symmetric());
  std::int64_t degree_sum = 0;
  for (std::int64_t i = 0; i < 64; ++i) degree_sum += a.graph.degree(i);
  EXPECT_EQ(degree_sum, 2 * a.graph.num_undirected_edges());
  EXPECT_TRUE(a.features.all_finite());
}

TEST(GenerateSynthetic, ParameterErrors) {
  EXPECT_THROW(generate_synthetic(10, 2, 0.1, 0.2, 3, 1), ParamError);  // p_out > p_in
  EXPECT_THROW(generate_synthetic(10, 0, 0.1, 0.0, 3, 1), ParamError);
  EXPECT_THROW(generate_synthetic(10, 11, 0.1, 0.0, 3, 1), ParamError);
  EXPECT_THROW(generate_synthetic(10, 2, 1.5, 0.0, 3, 1), ParamError);
}

TEST(AttributedGraph, ValidateChecksShapes) {
  AttributedGraph data;
  data.graph = k2();
  data.features = testing::random_matrix(3, 2, 1);
  EXPECT_THROW(data.validate(), DimensionError);
  data.features = testing::random_matrix(2, 2, 1);
  data.labels = {1};
  EXPECT_THROW(data.validate(), DimensionError);
  data.labels = {1, 0};
  EXPECT_NO_THROW(data.validate());
}

TEST(SparseGraphConstruction, SortedRowsAndSymmetry) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SparseGraph g = random_graph(32, 0.2, seed);
    EXPECT_TRUE(g.is_symmetric());
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
      const auto nb = g.neighbors(i);
      for (std::size_t k = 1; k < nb.size(); ++k) EXPECT_LT(nb[k - 1], nb[k]);
    }
    std::int64_t degree_sum = 0;
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) degree_sum += g.degree(i);
    EXPECT_EQ(degree_sum, 2 * g.num_undirected_edges());
  }
}

}  // namespace
}  // namespace neigad
