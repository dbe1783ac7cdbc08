#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "botdetect/error.hpp"
#include "botdetect/identification.hpp"
#include "botdetect/sampler.hpp"
#include "oracles.hpp"

using namespace botdetect;

TEST(Xi, MatchesOracleFormula) {
  for (std::size_t n : {1000u, 10000u, 1000000u}) {
    for (std::size_t k : {1u, 10u, 50u}) {
      for (double np : {1.0, 5.0, 30.0}) {
        const double p = np / static_cast<double>(n);
        const long double l = std::log(static_cast<long double>(n) / k);
        const long double w = oracle::lambert_w0(l / (k * p * std::numbers::e_v<long double>));
        const double expected = static_cast<double>(std::max(0.0L, 1.1L * l / w));
        EXPECT_NEAR(xi_threshold(n, k, p, 0.1), expected, 1e-12 * expected) << n << ' ' << k << ' ' << np;
      }
    }
  }
}

TEST(Xi, DomainErrors) {
  EXPECT_THROW(xi_threshold(100, 0, 0.1, 0.1), DomainError);
  EXPECT_THROW(xi_threshold(100, 100, 0.1, 0.1), DomainError);
  EXPECT_THROW(xi_threshold(100, 5, 0.0, 0.1), DomainError);
  EXPECT_THROW(xi_threshold(100, 5, 0.1, 0.0), DomainError);
}

TEST(Xi, GrowsWithBotnetEdgeMass) {
  EXPECT_LT(xi_threshold(10000, 10, 1e-4, 0.1), xi_threshold(10000, 10, 1e-3, 0.1));
  EXPECT_LT(xi_threshold(10000, 10, 1e-3, 0.1), xi_threshold(10000, 10, 1e-3, 0.5));
}

TEST(Risk, SetSemantics) {
  const std::vector<VertexId> truth{1, 2, 3, 4};
  EXPECT_EQ(identification_risk(truth, truth).value, 0.0);
  EXPECT_EQ(identification_risk(std::vector<VertexId>{}, truth).value, 0.5);
  const auto r = identification_risk(std::vector<VertexId>{4, 2, 9, 9}, truth);
  EXPECT_EQ(r.missed, 2u);
  EXPECT_EQ(r.false_positive, 1u);
  EXPECT_EQ(r.value, 3.0 / 8.0);
  EXPECT_EQ(identification_risk(std::vector<VertexId>{5, 6, 7, 8, 9, 10}, truth).value, 10.0 / 8.0);
  EXPECT_THROW(identification_risk(truth, std::vector<VertexId>{}), std::invalid_argument);
}

TEST(Identify, FindsPlantedBotnetInDenseRegime) {
  const ModelParams m{5000, 2, Density::average_degree(30.0), 5};
  const auto s = sample_alternative(m, 4);
  const auto est = identify_botnet(s.graph, 2, 5, s.params.p, 0.1);
  EXPECT_EQ(est.kissing, 6u);
  EXPECT_DOUBLE_EQ(est.threshold_used, 6.0 + est.xi);
  EXPECT_EQ(est.suspects, s.botnet);
  EXPECT_EQ(est.topk_suspects, s.botnet);
  EXPECT_TRUE(std::is_sorted(est.suspects.begin(), est.suspects.end()));
  const auto json = est.to_json();
  for (const char* key : {"threshold_used", "xi", "epsilon", "suspects", "topk_suspects"}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

TEST(Identify, TopKTieBreaksOnLowerId) {
  // Two disjoint stars of equal size: the lower center wins the single slot.
  std::vector<Edge> e;
  for (VertexId i = 1; i <= 8; ++i) e.emplace_back(0, i);
  for (VertexId i = 10; i <= 17; ++i) e.emplace_back(9, i);
  const Graph g = Graph::from_edges(18, e);
  const auto est = identify_botnet(g, 2, 1, 0.1, 0.1);
  EXPECT_EQ(est.topk_suspects, (std::vector<VertexId>{0}));
}
