#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "botdetect/detection.hpp"
#include "botdetect/sampler.hpp"
#include "botdetect/star.hpp"

namespace botdetect {

enum class ExperimentMode { kPower, kRisk, kCalibrate, kHistogram, kAudit };

std::string_view to_string(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view name);

/// One (n, d, np, k) combination of a sweep.
struct GridPoint {
  std::size_t n = 0;
  int d = 2;
  double np = 0.0;
  std::size_t k = 0;

  ModelParams model() const { return {n, d, Density::average_degree(np), k}; }
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kPower;
  std::vector<std::size_t> n;
  std::vector<int> d;
  std::vector<double> np;
  std::vector<std::size_t> k;
  std::size_t replicates = 100;
  std::vector<double> alpha{0.05};
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::vector<Statistic> statistics{Statistic::kMaxStar, Statistic::kAverageDistance};
  std::vector<ThresholdSource> threshold_sources{ThresholdSource::kAnalytic};
  std::size_t calibration_replicates = 5000;
  StarMethod star_method = StarMethod::kGreedy;
  std::size_t exact_cap = kDefaultExactCap;
  std::uint64_t distance_sample_pairs = 0;
  int d_max = 64;
  /// Histogram bin width for the average distance; 0 picks 40 bins over the range.
  double distance_bin_width = 0.0;

  /// Parses the JSON form. Grid fields accept a scalar or a list. "seed" is required.
  static ExperimentConfig from_json(std::string_view text);
  std::string to_json() const;

  /// Throws std::invalid_argument on empty grids, replicates < 1, bad alphas.
  void validate() const;

  /// Cartesian product in (n, d, np, k) order, k varying fastest.
  std::vector<GridPoint> grid() const;
};

/// Monte Carlo calibrations shared between a power sweep and the audit of the
/// same config. Entries are dropped when the calibration settings change.
struct CalibrationCache {
  std::string settings;
  std::map<std::tuple<std::size_t, int, double>, std::map<Statistic, CalibrationTable>> tables;
};

struct RunContext {
  /// Progress and warnings; null silences them.
  std::ostream* log = nullptr;
  std::size_t workers = 0;  // 0 = default_worker_count()
  CalibrationCache* calibrations = nullptr;
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct PowerRow {
  GridPoint point;
  Statistic test = Statistic::kMaxStar;
  ThresholdSource source = ThresholdSource::kAnalytic;
  /// Absent for analytic thresholds.
  std::optional<double> alpha;
  /// Monte Carlo threshold; absent for analytic (it varies with the estimates).
  std::optional<double> threshold;
  std::size_t replicates = 0;
  std::size_t rejections = 0;
  double power = 0.0;
  WilsonInterval ci;
  double mean_statistic = 0.0;
};

/// Rejection rates of the selected tests on alternative samples. Analytic
/// thresholds use the estimated dimension and radius of each sample; Monte
/// Carlo thresholds are calibrated on null samples at the true parameters.
/// Infeasible grid points are skipped with a warning.
std::vector<PowerRow> run_power_sweep(const ExperimentConfig& config, const RunContext& ctx = {});

/// Same rows, evaluated on fresh null samples (k forced to 0).
std::vector<PowerRow> run_null_calibration_audit(const ExperimentConfig& config, const RunContext& ctx = {});

/// Calibration tables, one per (grid point, statistic), grid k ignored.
std::vector<CalibrationTable> run_calibration(const ExperimentConfig& config, const RunContext& ctx = {});

struct HistogramBin {
  GridPoint point;
  Statistic statistic = Statistic::kMaxStar;
  bool alternative = false;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double threshold = 0.0;
  double alpha = 0.05;
};

/// Binned null and alternative distributions of each statistic plus the
/// null alpha-quantile threshold (first alpha of the config).
std::vector<HistogramBin> run_histogram(const ExperimentConfig& config, const RunContext& ctx = {});

struct RiskRow {
  GridPoint point;
  double epsilon = 0.0;
  std::size_t replicates = 0;
  double mean_risk = 0.0;
  double std_error = 0.0;
  double mean_topk_risk = 0.0;
  double mean_suspects = 0.0;
  double xi = 0.0;
};

/// Mean identification risk of the isolated-star estimator (true d, k, p).
std::vector<RiskRow> run_risk_sweep(const ExperimentConfig& config, const RunContext& ctx = {});

struct IsolationProbe {
  std::size_t replicates = 0;
  std::size_t all_isolated = 0;
  double frequency = 0.0;
  /// e^{-npk}.
  double asymptotic_reference = 0.0;
  /// (1 - p)^{k(n-1) - k(k-1)/2}, the exact probability under the model.
  double exact_reference = 0.0;
};

/// Frequency over alternative samples that every botnet vertex has degree 0.
/// np = 0 is accepted: no edge can form, so the frequency is 1.
IsolationProbe run_isolation_probe(std::size_t n, double np, std::size_t k, std::size_t replicates,
                                   std::uint64_t seed, int d = 2, const RunContext& ctx = {});

void write_power_csv(const std::vector<PowerRow>& rows, std::ostream& out);
void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out);
void write_risk_csv(const std::vector<RiskRow>& rows, std::ostream& out);

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_double(double x);

}  // namespace botdetect
