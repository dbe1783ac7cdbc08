#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/graph.hpp"
#include "botdetect/sampler.hpp"
#include "botdetect/star.hpp"

namespace botdetect {

enum class Statistic { kMaxStar, kAverageDistance };
enum class ThresholdSource { kAnalytic, kMonteCarlo };

std::string_view to_string(Statistic s);
std::string_view to_string(ThresholdSource s);
/// Accepts "max_star"/"star" and "avg_distance"/"distance".
Statistic parse_statistic(std::string_view name);

/// Whether `value` falls in the rejection region of `stat` for `threshold`:
/// above it for the max star, below it for the average distance.
bool rejects(Statistic stat, double value, double threshold);

struct TestVerdict {
  Statistic statistic_kind = Statistic::kMaxStar;
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;
  ThresholdSource threshold_source = ThresholdSource::kAnalytic;
  /// Average-distance test only: whether the whole graph is one component.
  std::optional<bool> all_connected;
  /// Star test only: vertices sized by the greedy bound above the exact cap.
  std::size_t greedy_fallbacks = 0;
};

struct StarOptions {
  StarMethod method = StarMethod::kExact;
  std::size_t exact_cap = kDefaultExactCap;
};

/// Distance statistic mode. Exact unless pair sampling is explicitly requested.
struct DistanceOptions {
  std::uint64_t sample_pairs = 0;  // 0 = exact
  std::uint64_t sample_seed = 0;
};

/// Rejects when the largest isolated star exceeds the kissing number of d.
TestVerdict isolated_star_test(const Graph& g, int d, const StarOptions& options = {});

/// (1 - epsilon) * d / (2 (d + 1)) / r.
double average_distance_threshold(int d, double r, double epsilon);

/// Rejects when the average graph distance is below average_distance_threshold.
/// Requires r in (0, 1/2] and epsilon in (0, 1). Throws UndefinedStatistic
/// when the graph has no edges.
TestVerdict average_distance_test(const Graph& g, int d, double r, double epsilon = 0.1,
                                  const DistanceOptions& options = {});

/// Value of a statistic on a graph.
double evaluate_statistic(Statistic stat, const Graph& g, const StarOptions& star = {},
                          const DistanceOptions& distance = {});

/// Verdict against an externally supplied (e.g. Monte Carlo) threshold.
TestVerdict verdict_from_threshold(Statistic stat, double value, double threshold, ThresholdSource source);

/// Order statistic at rank ceil(q * R) (1-based) of an ascending sample, where
/// q = 1 - alpha for the max star and q = alpha for the average distance.
double empirical_threshold(Statistic stat, std::span<const double> sorted_samples, double alpha);

/// Empirical null distribution of one statistic at one model point.
struct CalibrationTable {
  Statistic stat = Statistic::kMaxStar;
  std::size_t n = 0;
  int d = 0;
  double p = 0.0;
  std::size_t replicates = 0;
  std::map<double, double> alpha_to_threshold;
  /// Ascending; may be empty when loaded from a file written without samples.
  std::vector<double> sorted_samples;

  /// Stored threshold for alpha, else computed from the samples. Throws
  /// std::out_of_range when neither is available.
  double threshold(double alpha) const;

  std::string to_json(bool include_samples = true) const;
  static CalibrationTable from_json(std::string_view text);
};

/// Builds a table from raw null statistics (any order).
CalibrationTable make_calibration_table(Statistic stat, const NormalizedParams& params,
                                        std::vector<double> samples, std::span<const double> alphas);

/// Samples `replicates` null graphs on derived seeds, evaluates `stat` on each
/// and records the empirical thresholds for every alpha.
/// Requires replicates >= 100, k == 0 and every alpha in (0, 1).
CalibrationTable monte_carlo_threshold(Statistic stat, const ModelParams& null_params, std::size_t replicates,
                                       std::span<const double> alphas, std::uint64_t seed,
                                       const StarOptions& star = {StarMethod::kGreedy, kDefaultExactCap},
                                       const DistanceOptions& distance = {});

}  // namespace botdetect
