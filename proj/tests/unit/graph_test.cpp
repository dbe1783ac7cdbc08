#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "botdetect/error.hpp"
#include "botdetect/graph.hpp"
#include "oracles.hpp"

using botdetect::Edge;
using botdetect::Graph;
using botdetect::ParseError;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

}  // namespace

TEST(GraphCsr, SortedAdjacencyAndLookup) {
  const std::vector<Edge> e{{3, 0}, {0, 1}, {2, 1}};
  const Graph g = Graph::from_edges(4, e);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(std::vector<botdetect::VertexId>(g.neighbors(0).begin(), g.neighbors(0).end()),
            (std::vector<botdetect::VertexId>{1, 3}));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}}));
}

TEST(GraphCsr, RejectsNonSimpleInput) {
  const std::vector<Edge> loop{{1, 1}};
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const std::vector<Edge> range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(3, loop), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, dup), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, range), std::invalid_argument);
}

TEST(GraphCsr, RelabelPreservesStructure) {
  const Graph g = path(5);
  const std::vector<botdetect::VertexId> perm{4, 2, 0, 1, 3};
  const Graph h = g.relabeled(perm);
  for (const auto& [u, v] : g.edges()) EXPECT_TRUE(h.has_edge(perm[u], perm[v]));
  EXPECT_EQ(h.num_edges(), g.num_edges());
}

TEST(Bfs, PathDistances) {
  const Graph g = path(6);
  const auto d = botdetect::bfs_distances(g, 2);
  EXPECT_EQ(d, (std::vector<std::uint32_t>{2, 1, 0, 1, 2, 3}));
  EXPECT_THROW(botdetect::bfs_distances(g, 6), std::out_of_range);
}

TEST(Components, LabelsAndConnectivity) {
  const std::vector<Edge> e{{0, 1}, {2, 3}, {3, 4}};
  const Graph g = Graph::from_edges(6, e);
  std::size_t count = 0;
  const auto label = botdetect::connected_components(g, &count);
  EXPECT_EQ(count, 3u);
  EXPECT_EQ(label, (std::vector<std::uint32_t>{0, 0, 1, 1, 1, 2}));
  EXPECT_FALSE(botdetect::is_connected(g));
  const std::vector<botdetect::VertexId> sub{2, 3, 4};
  EXPECT_TRUE(botdetect::is_connected(g, std::span<const botdetect::VertexId>(sub)));
  const std::vector<botdetect::VertexId> split{2, 4};
  EXPECT_FALSE(botdetect::is_connected(g, std::span<const botdetect::VertexId>(split)));
  EXPECT_TRUE(botdetect::is_connected(path(4)));
}

TEST(AverageDistance, PathClosedForm) {
  // Sum over pairs of |i - j| on a path of n vertices is (n^3 - n) / 6.
  for (std::size_t n : {2u, 3u, 10u, 600u, 1500u}) {
    const auto s = botdetect::average_graph_distance(path(n));
    EXPECT_EQ(s.distance_sum, (n * n * n - n) / 6);
    EXPECT_EQ(s.connected_pair_count, n * (n - 1) / 2);
    EXPECT_TRUE(s.all_connected);
    EXPECT_FALSE(s.sampled);
  }
}

TEST(AverageDistance, MatchesFloydWarshall) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const double q = std::uniform_real_distribution<double>(0.02, 0.4)(rng);
    auto edges = oracle::random_edges(n, q, rng);
    if (edges.empty()) edges.emplace_back(0, 1);
    const Graph g = Graph::from_edges(n, edges);
    const auto [sum, pairs] = oracle::floyd_warshall_sum(g);
    const auto s = botdetect::average_graph_distance(g);
    EXPECT_EQ(s.distance_sum, sum);
    EXPECT_EQ(s.connected_pair_count, pairs);
    EXPECT_EQ(s.average, static_cast<double>(sum) / static_cast<double>(pairs));
    EXPECT_EQ(s.all_connected, pairs == n * (n - 1) / 2);
  }
}

TEST(AverageDistance, LargeBatchesMatchPerSourceBfs) {
  // Several source batches and a few components.
  std::mt19937_64 rng(5);
  const std::size_t n = 1400;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i % 450 != 449) edges.emplace_back(i, i + 1);
  }
  for (int extra = 0; extra < 300; ++extra) {
    const auto u = rng() % n;
    const auto v = rng() % n;
    if (u / 450 == v / 450 && u != v && (u > v ? u - v : v - u) > 1) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const Graph g = Graph::from_edges(n, edges);
  std::uint64_t sum = 0;
  std::uint64_t pairs = 0;
  for (botdetect::VertexId s = 0; s < n; ++s) {
    const auto d = botdetect::bfs_distances(g, s);
    for (botdetect::VertexId t = s + 1; t < n; ++t) {
      if (d[t] != botdetect::kUnreachable) {
        sum += d[t];
        ++pairs;
      }
    }
  }
  const auto s = botdetect::average_graph_distance(g);
  EXPECT_EQ(s.distance_sum, sum);
  EXPECT_EQ(s.connected_pair_count, pairs);
  EXPECT_FALSE(s.all_connected);
}

TEST(AverageDistance, UndefinedCases) {
  EXPECT_THROW(botdetect::average_graph_distance(Graph::from_edges(1, {})), std::invalid_argument);
  EXPECT_THROW(botdetect::average_graph_distance(Graph::from_edges(5, {})), botdetect::UndefinedStatistic);
}

TEST(AverageDistance, SampledEstimateIsCloseAndDeterministic) {
  const Graph g = path(300);
  const auto exact = botdetect::average_graph_distance(g);
  const auto a = botdetect::average_graph_distance_sampled(g, 5000, 42);
  const auto b = botdetect::average_graph_distance_sampled(g, 5000, 42);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.average, b.average);
  EXPECT_NEAR(a.average, exact.average, 0.05 * exact.average);
  // Asking for at least every pair gives the exact value.
  const auto all = botdetect::average_graph_distance_sampled(g, 1'000'000, 1);
  EXPECT_EQ(all.average, exact.average);
}

TEST(AverageDistance, SampledAllButOnePairAcrossBatches) {
  // Two components, more than one 512-source batch. Dropping a single pair
  // from the sample removes exactly that pair's distance.
  std::mt19937_64 rng(17);
  std::vector<botdetect::Edge> edges;
  // Random recursive trees on [0, 350) and [350, 700).
  for (botdetect::VertexId v = 1; v < 700; ++v) {
    if (v == 350) continue;
    const botdetect::VertexId root = v < 350 ? 0 : 350;
    edges.emplace_back(static_cast<botdetect::VertexId>(root + rng() % (v - root)), v);
  }
  const Graph g = Graph::from_edges(700, edges);
  const auto exact = botdetect::average_graph_distance(g);
  const std::uint64_t total = 700ULL * 699 / 2;
  const auto s = botdetect::average_graph_distance_sampled(g, total - 1, 5);
  const std::uint64_t missing_count = exact.connected_pair_count - s.connected_pair_count;
  const std::uint64_t missing_sum = exact.distance_sum - s.distance_sum;
  ASSERT_LE(missing_count, 1u);
  if (missing_count == 0) {
    EXPECT_EQ(missing_sum, 0u);
  } else {
    EXPECT_GE(missing_sum, 1u);
    EXPECT_LE(missing_sum, 699u);
  }
  EXPECT_FALSE(s.all_connected);
}

TEST(EdgeListIo, RoundTrip) {
  std::mt19937_64 rng(3);
  const Graph g = Graph::from_edges(30, oracle::random_edges(30, 0.2, rng));
  std::stringstream buf;
  botdetect::write_edge_list(g, buf);
  EXPECT_EQ(botdetect::read_edge_list(buf), g);
}

TEST(EdgeListIo, CommentsBlankLinesAndReversedPairs) {
  std::istringstream in("# graph\n3 2\n\n2 1\n# mid\n0 1\n");
  const Graph g = botdetect::read_edge_list(in);
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_EQ(g.num_edges(), 2u);
}

namespace {

void expect_parse_error(const std::string& text, ParseError::Kind kind, std::size_t line) {
  std::istringstream in(text);
  try {
    botdetect::read_edge_list(in);
    ADD_FAILURE() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), kind) << text;
    EXPECT_EQ(e.line(), line) << text;
  }
}

}  // namespace

TEST(EdgeListIo, ParseErrorsCarryKindAndLine) {
  expect_parse_error("", ParseError::Kind::kHeader, 1);
  expect_parse_error("three 2\n", ParseError::Kind::kHeader, 1);
  expect_parse_error("3 1\n0 x\n", ParseError::Kind::kMalformedLine, 2);
  expect_parse_error("3 1\n0 1 2\n", ParseError::Kind::kMalformedLine, 2);
  expect_parse_error("3 1\n0 3\n", ParseError::Kind::kVertexRange, 2);
  expect_parse_error("3 1\n2 2\n", ParseError::Kind::kSelfLoop, 2);
  expect_parse_error("3 2\n0 1\n1 0\n", ParseError::Kind::kDuplicateEdge, 3);
  expect_parse_error("3 2\n0 1\n", ParseError::Kind::kEdgeCount, 2);
  expect_parse_error("3 1\n0 1\n1 2\n", ParseError::Kind::kEdgeCount, 3);
}
