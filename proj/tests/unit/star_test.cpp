#include <gtest/gtest.h>

#include <random>

#include "botdetect/graph.hpp"
#include "botdetect/sampler.hpp"
#include "botdetect/star.hpp"
#include "oracles.hpp"

using namespace botdetect;

namespace {

using LocalEdges = std::vector<std::pair<std::size_t, std::size_t>>;

LocalEdges random_local_edges(std::size_t t, double q, std::mt19937_64& rng) {
  LocalEdges out;
  std::bernoulli_distribution coin(q);
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t b = a + 1; b < t; ++b) {
      if (coin(rng)) out.emplace_back(a, b);
    }
  }
  return out;
}

// Vertex 0 joined to 1..t, plus the given edges among 1..t (0-based local ids).
Graph wheel_like(std::size_t t, const LocalEdges& local) {
  std::vector<Edge> e;
  for (std::size_t a = 1; a <= t; ++a) e.emplace_back(0, a);
  for (const auto& [a, b] : local) e.emplace_back(a + 1, b + 1);
  return Graph::from_edges(t + 1, e);
}

}  // namespace

TEST(IsolatedStar, SixNeighborsTwoInnerEdges) {
  // Neighbors 1..6 of the center; 6 touches 1 and 5.
  const LocalEdges local{{0, 5}, {4, 5}};
  const Graph g = wheel_like(6, local);
  EXPECT_EQ(isolated_star_size(g, 0, StarMethod::kExact), 5u);
  EXPECT_EQ(isolated_star_size(g, 0, StarMethod::kGreedy), 5u);
}

TEST(IsolatedStar, ExactMatchesSubsetBruteForce) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = rng() % 15;
    const double q = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
    const auto local = random_local_edges(t, q, rng);
    const NeighborhoodGraph h(t, local);
    const std::size_t expected = oracle::max_independent_set(t, local);
    EXPECT_EQ(h.maximum_independent_set(), expected);
    EXPECT_LE(h.greedy_independent_set(), expected);
    EXPECT_EQ(isolated_star_size(wheel_like(t, local), 0, StarMethod::kExact), expected);
  }
}

TEST(IsolatedStar, ExactHandlesSixtyFourVertices) {
  std::mt19937_64 rng(8);
  // Disjoint union of 16 four-cycles: the maximum independent set is 32.
  LocalEdges local;
  for (std::size_t c = 0; c < 16; ++c) {
    const std::size_t b = 4 * c;
    local.insert(local.end(), {{b, b + 1}, {b + 1, b + 2}, {b + 2, b + 3}, {b, b + 3}});
  }
  EXPECT_EQ(NeighborhoodGraph(64, local).maximum_independent_set(), 32u);
  EXPECT_EQ(NeighborhoodGraph(64, {}).maximum_independent_set(), 64u);
  const auto dense = random_local_edges(64, 0.5, rng);
  const NeighborhoodGraph h(64, dense);
  EXPECT_GE(h.maximum_independent_set(), h.greedy_independent_set());
}

TEST(IsolatedStar, GreedyTieBreaksOnLowestIndex) {
  // Path 0-1-2-3: minimum degrees are 0 and 3; greedy takes 0 then 2 or 3.
  const NeighborhoodGraph h(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(h.greedy_independent_set(), 2u);
  // Triangle plus pendant: greedy picks the pendant first.
  EXPECT_EQ(NeighborhoodGraph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}).greedy_independent_set(), 2u);
}

TEST(IsolatedStar, CapAndFallback) {
  const Graph g = wheel_like(40, {});
  EXPECT_THROW(isolated_star_size(g, 0, StarMethod::kExact, 32), ExactCapExceeded);
  EXPECT_EQ(isolated_star_size(g, 0, StarMethod::kExact, 64), 40u);
  const auto profile = isolated_star_profile(g, StarMethod::kExact, 32);
  EXPECT_EQ(profile.greedy_fallbacks, 1u);
  EXPECT_EQ(profile.max_star, 40u);
  EXPECT_THROW(isolated_star_size(wheel_like(70, {}), 0, StarMethod::kExact, 80), std::invalid_argument);
}

TEST(IsolatedStar, EmptyAndLeafNeighborhoods) {
  const Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(isolated_star_size(g, 2, StarMethod::kExact), 0u);
  EXPECT_EQ(isolated_star_size(g, 0, StarMethod::kExact), 1u);
}

TEST(MaxStar, AgreesWithFullProfile) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = sample_alternative(ModelParams{3000, 2, Density::average_degree(8.0), 4}, seed);
    for (auto method : {StarMethod::kExact, StarMethod::kGreedy}) {
      const auto profile = isolated_star_profile(s.graph, method);
      const auto best = max_isolated_star(s.graph, method);
      EXPECT_EQ(best.value, profile.max_star);
      EXPECT_EQ(profile.per_vertex_star_size[best.argmax], best.value);
    }
  }
}

TEST(MaxStar, NullStarsNeverExceedKissingNumberInThePlane) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_null(ModelParams{2000, 2, Density::average_degree(15.0), 0}, seed);
    EXPECT_LE(max_isolated_star(s.graph, StarMethod::kExact).value, 6u);
  }
}
