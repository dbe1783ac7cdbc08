#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "botdetect/detection.hpp"
#include "botdetect/error.hpp"

using namespace botdetect;

namespace {

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

}  // namespace

TEST(Names, RoundTrip) {
  EXPECT_EQ(parse_statistic(to_string(Statistic::kMaxStar)), Statistic::kMaxStar);
  EXPECT_EQ(parse_statistic("distance"), Statistic::kAverageDistance);
  EXPECT_EQ(to_string(ThresholdSource::kMonteCarlo), "monte_carlo");
  EXPECT_THROW(parse_statistic("median"), std::invalid_argument);
}

TEST(RejectionRegion, Directions) {
  EXPECT_TRUE(rejects(Statistic::kMaxStar, 7, 6));
  EXPECT_FALSE(rejects(Statistic::kMaxStar, 6, 6));
  EXPECT_TRUE(rejects(Statistic::kAverageDistance, 4.9, 5.0));
  EXPECT_FALSE(rejects(Statistic::kAverageDistance, 5.0, 5.0));
}

TEST(StarTest, KissingNumberBoundary) {
  EXPECT_FALSE(isolated_star_test(star_graph(6), 2).reject);
  const auto v = isolated_star_test(star_graph(7), 2);
  EXPECT_TRUE(v.reject);
  EXPECT_EQ(v.statistic, 7.0);
  EXPECT_EQ(v.threshold, 6.0);
  EXPECT_FALSE(isolated_star_test(star_graph(7), 3).reject);
  EXPECT_THROW(isolated_star_test(star_graph(3), 1), DomainError);
}

TEST(DistanceTest, ThresholdFormula) {
  EXPECT_DOUBLE_EQ(average_distance_threshold(2, 0.1, 0.1), 0.9 * (2.0 / 6.0) / 0.1);
  EXPECT_DOUBLE_EQ(average_distance_threshold(7, 0.25, 0.2), 0.8 * (7.0 / 16.0) / 0.25);
  EXPECT_THROW(average_distance_threshold(2, 0.0, 0.1), DomainError);
  EXPECT_THROW(average_distance_threshold(2, 0.6, 0.1), DomainError);
  EXPECT_THROW(average_distance_threshold(2, 0.1, 0.0), DomainError);
  EXPECT_THROW(average_distance_threshold(2, 0.1, 1.0), DomainError);
}

TEST(DistanceTest, VerdictCarriesConnectivity) {
  // A star has average distance (k + 2 C(k,2)) / C(k+1,2) = 2 - 2/(k+1).
  const auto v = average_distance_test(star_graph(9), 2, 0.01, 0.1);
  EXPECT_DOUBLE_EQ(v.statistic, 2.0 - 2.0 / 10.0);
  EXPECT_TRUE(v.reject);
  ASSERT_TRUE(v.all_connected.has_value());
  EXPECT_TRUE(*v.all_connected);
  EXPECT_THROW(average_distance_test(Graph::from_edges(4, {}), 2, 0.1), UndefinedStatistic);
}

TEST(EmpiricalThreshold, OrderStatisticRanks) {
  std::vector<double> s(100);
  for (int i = 0; i < 100; ++i) s[i] = i + 1;
  // Rank ceil(0.95 * 100) = 95 for the star, ceil(0.05 * 100) = 5 for the distance.
  EXPECT_EQ(empirical_threshold(Statistic::kMaxStar, s, 0.05), 95.0);
  EXPECT_EQ(empirical_threshold(Statistic::kAverageDistance, s, 0.05), 5.0);
  std::vector<double> odd(7);
  for (int i = 0; i < 7; ++i) odd[i] = i;
  EXPECT_EQ(empirical_threshold(Statistic::kMaxStar, odd, 0.5), 3.0);
  EXPECT_EQ(empirical_threshold(Statistic::kAverageDistance, odd, 0.01), 0.0);
  EXPECT_THROW(empirical_threshold(Statistic::kMaxStar, std::vector<double>{}, 0.05), std::invalid_argument);
  EXPECT_THROW(empirical_threshold(Statistic::kMaxStar, s, 0.0), std::invalid_argument);
}

TEST(EmpiricalThreshold, NullRejectionRateAtMostAlphaForContinuousSamples) {
  std::vector<double> s(1000);
  for (int i = 0; i < 1000; ++i) s[i] = std::sqrt(static_cast<double>(i));
  for (double alpha : {0.01, 0.05, 0.1}) {
    const double t_hi = empirical_threshold(Statistic::kMaxStar, s, alpha);
    const double t_lo = empirical_threshold(Statistic::kAverageDistance, s, alpha);
    const auto above = std::count_if(s.begin(), s.end(), [&](double x) { return x > t_hi; });
    const auto below = std::count_if(s.begin(), s.end(), [&](double x) { return x < t_lo; });
    EXPECT_LE(above, alpha * 1000);
    EXPECT_LE(below, alpha * 1000);
  }
}

TEST(Calibration, JsonRoundTrip) {
  const NormalizedParams params{500, 3, 0, 0.02, 0.1};
  const std::vector<double> alphas{0.01, 0.05};
  const auto table = make_calibration_table(Statistic::kAverageDistance, params, {5.5, 4.25, 6.0, 5.0}, alphas);
  EXPECT_EQ(table.sorted_samples, (std::vector<double>{4.25, 5.0, 5.5, 6.0}));
  const auto back = CalibrationTable::from_json(table.to_json());
  EXPECT_EQ(back.stat, table.stat);
  EXPECT_EQ(back.n, 500u);
  EXPECT_EQ(back.d, 3);
  EXPECT_EQ(back.p, 0.02);
  EXPECT_EQ(back.alpha_to_threshold, table.alpha_to_threshold);
  EXPECT_EQ(back.sorted_samples, table.sorted_samples);
  const auto lean = CalibrationTable::from_json(table.to_json(false));
  EXPECT_TRUE(lean.sorted_samples.empty());
  EXPECT_EQ(lean.threshold(0.05), table.threshold(0.05));
  EXPECT_THROW(lean.threshold(0.2), std::out_of_range);
  EXPECT_EQ(table.threshold(0.5), 5.0);
}

TEST(Calibration, MalformedJson) {
  EXPECT_THROW(CalibrationTable::from_json("{"), std::invalid_argument);
  EXPECT_THROW(CalibrationTable::from_json(R"({"stat":"max_star"})"), std::invalid_argument);
  EXPECT_THROW(CalibrationTable::from_json(
                   R"({"stat":"max_star","n":5,"d":2,"p":0.1,"replicates":2,"alpha_to_threshold":{},"sorted_samples":[3,1]})"),
               std::invalid_argument);
}

TEST(MonteCarlo, DeterministicAndValidated) {
  const ModelParams null_model{1500, 2, Density::average_degree(8.0), 0};
  const std::vector<double> alphas{0.05};
  const auto a = monte_carlo_threshold(Statistic::kMaxStar, null_model, 100, alphas, 9);
  const auto b = monte_carlo_threshold(Statistic::kMaxStar, null_model, 100, alphas, 9);
  EXPECT_EQ(a.sorted_samples, b.sorted_samples);
  EXPECT_EQ(a.replicates, 100u);
  EXPECT_LE(a.threshold(0.05), 6.0);
  EXPECT_THROW(monte_carlo_threshold(Statistic::kMaxStar, null_model, 99, alphas, 9), std::invalid_argument);
  EXPECT_THROW(monte_carlo_threshold(Statistic::kMaxStar, ModelParams{1500, 2, Density::average_degree(8.0), 1}, 100,
                                     alphas, 9),
               std::invalid_argument);
}
