#include "botdetect/detection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "botdetect/error.hpp"
#include "botdetect/geometry.hpp"
#include "botdetect/parallel.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

std::string_view to_string(Statistic s) {
  return s == Statistic::kMaxStar ? "max_star" : "avg_distance";
}

std::string_view to_string(ThresholdSource s) {
  return s == ThresholdSource::kAnalytic ? "analytic" : "monte_carlo";
}

Statistic parse_statistic(std::string_view name) {
  if (name == "max_star" || name == "star") return Statistic::kMaxStar;
  if (name == "avg_distance" || name == "distance") return Statistic::kAverageDistance;
  throw std::invalid_argument("unknown statistic: " + std::string(name));
}

bool rejects(Statistic stat, double value, double threshold) {
  return stat == Statistic::kMaxStar ? value > threshold : value < threshold;
}

TestVerdict verdict_from_threshold(Statistic stat, double value, double threshold, ThresholdSource source) {
  TestVerdict v;
  v.statistic_kind = stat;
  v.statistic = value;
  v.threshold = threshold;
  v.reject = rejects(stat, value, threshold);
  v.threshold_source = source;
  return v;
}

TestVerdict isolated_star_test(const Graph& g, int d, const StarOptions& options) {
  if (d < 2) throw DomainError("isolated_star_test: dimension must be >= 2");
  const auto kissing = static_cast<double>(geometry::kissing_number(d));
  const MaxStar star = max_isolated_star(g, options.method, options.exact_cap);
  TestVerdict v = verdict_from_threshold(Statistic::kMaxStar, static_cast<double>(star.value), kissing,
                                         ThresholdSource::kAnalytic);
  v.greedy_fallbacks = star.greedy_fallbacks;
  return v;
}

double average_distance_threshold(int d, double r, double epsilon) {
  if (d < 2) throw DomainError("average_distance_threshold: dimension must be >= 2");
  if (!(r > 0.0 && r <= 0.5)) throw DomainError("average_distance_threshold: radius must lie in (0, 1/2]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("average_distance_threshold: epsilon must lie in (0, 1)");
  return (1.0 - epsilon) * (static_cast<double>(d) / (2.0 * (d + 1.0))) / r;
}

namespace {

DistanceSummary distance_summary(const Graph& g, const DistanceOptions& options) {
  return options.sample_pairs == 0 ? average_graph_distance(g)
                                   : average_graph_distance_sampled(g, options.sample_pairs, options.sample_seed);
}

}  // namespace

TestVerdict average_distance_test(const Graph& g, int d, double r, double epsilon, const DistanceOptions& options) {
  const double threshold = average_distance_threshold(d, r, epsilon);
  const DistanceSummary summary = distance_summary(g, options);
  TestVerdict v =
      verdict_from_threshold(Statistic::kAverageDistance, summary.average, threshold, ThresholdSource::kAnalytic);
  v.all_connected = summary.all_connected;
  return v;
}

double evaluate_statistic(Statistic stat, const Graph& g, const StarOptions& star, const DistanceOptions& distance) {
  if (stat == Statistic::kMaxStar) {
    return static_cast<double>(max_isolated_star(g, star.method, star.exact_cap).value);
  }
  return distance_summary(g, distance).average;
}

double empirical_threshold(Statistic stat, std::span<const double> sorted_samples, double alpha) {
  if (sorted_samples.empty()) throw std::invalid_argument("empirical_threshold: no samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("empirical_threshold: alpha must lie in (0, 1)");
  const double q = stat == Statistic::kMaxStar ? 1.0 - alpha : alpha;
  const auto count = static_cast<double>(sorted_samples.size());
  // The 1e-9 guard keeps q * R from rounding past an integer rank.
  auto rank = static_cast<std::size_t>(std::ceil(q * count - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_samples.size());
  return sorted_samples[rank - 1];
}

double CalibrationTable::threshold(double alpha) const {
  if (auto it = alpha_to_threshold.find(alpha); it != alpha_to_threshold.end()) return it->second;
  if (!sorted_samples.empty()) return empirical_threshold(stat, sorted_samples, alpha);
  throw std::out_of_range("calibration table has no threshold for this alpha");
}

namespace {

std::string format_key(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string CalibrationTable::to_json(bool include_samples) const {
  nlohmann::ordered_json j;
  j["stat"] = std::string(to_string(stat));
  j["n"] = n;
  j["d"] = d;
  j["p"] = p;
  j["replicates"] = replicates;
  nlohmann::ordered_json thresholds = nlohmann::ordered_json::object();
  for (const auto& [alpha, value] : alpha_to_threshold) thresholds[format_key(alpha)] = value;
  j["alpha_to_threshold"] = thresholds;
  if (include_samples) j["sorted_samples"] = sorted_samples;
  return j.dump(2);
}

CalibrationTable CalibrationTable::from_json(std::string_view text) {
  CalibrationTable t;
  try {
    const auto j = nlohmann::json::parse(text);
    t.stat = parse_statistic(j.at("stat").get<std::string>());
    t.n = j.at("n").get<std::size_t>();
    t.d = j.at("d").get<int>();
    t.p = j.at("p").get<double>();
    t.replicates = j.at("replicates").get<std::size_t>();
    for (const auto& [key, value] : j.at("alpha_to_threshold").items()) {
      double alpha = 0.0;
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), alpha);
      if (ec != std::errc() || ptr != key.data() + key.size()) {
        throw std::invalid_argument("calibration table: malformed alpha key '" + key + "'");
      }
      t.alpha_to_threshold[alpha] = value.get<double>();
    }
    if (j.contains("sorted_samples")) t.sorted_samples = j["sorted_samples"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("calibration table: ") + e.what());
  }
  if (!std::is_sorted(t.sorted_samples.begin(), t.sorted_samples.end())) {
    throw std::invalid_argument("calibration table: sorted_samples not ascending");
  }
  return t;
}

CalibrationTable make_calibration_table(Statistic stat, const NormalizedParams& params, std::vector<double> samples,
                                        std::span<const double> alphas) {
  CalibrationTable t;
  t.stat = stat;
  t.n = params.n;
  t.d = params.d;
  t.p = params.p;
  t.replicates = samples.size();
  std::sort(samples.begin(), samples.end());
  t.sorted_samples = std::move(samples);
  for (double alpha : alphas) t.alpha_to_threshold[alpha] = empirical_threshold(stat, t.sorted_samples, alpha);
  return t;
}

CalibrationTable monte_carlo_threshold(Statistic stat, const ModelParams& null_params, std::size_t replicates,
                                       std::span<const double> alphas, std::uint64_t seed, const StarOptions& star,
                                       const DistanceOptions& distance) {
  if (replicates < 100) throw std::invalid_argument("monte_carlo_threshold: need at least 100 replicates");
  if (null_params.k != 0) throw std::invalid_argument("monte_carlo_threshold: calibration uses the null model (k = 0)");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("monte_carlo_threshold: alpha must lie in (0, 1)");
  }
  const NormalizedParams params = null_params.normalize();
  auto samples = parallel_map(replicates, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(StreamPurpose::kCalibration), i});
    const SampleOutput sample = sample_null(null_params, s);
    DistanceOptions dopt = distance;
    dopt.sample_seed = derive_seed(s, {static_cast<std::uint64_t>(StreamPurpose::kPairSampling)});
    return evaluate_statistic(stat, sample.graph, star, dopt);
  });
  return make_calibration_table(stat, params, std::move(samples), alphas);
}

}  // namespace botdetect
