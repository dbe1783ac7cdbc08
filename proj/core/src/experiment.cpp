#include "botdetect/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "botdetect/error.hpp"
#include "botdetect/estimation.hpp"
#include "botdetect/geometry.hpp"
#include "botdetect/identification.hpp"
#include "botdetect/parallel.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kPower: return "power";
    case ExperimentMode::kRisk: return "risk";
    case ExperimentMode::kCalibrate: return "calibrate";
    case ExperimentMode::kHistogram: return "histogram";
    case ExperimentMode::kAudit: return "audit";
  }
  return "power";
}

ExperimentMode parse_mode(std::string_view name) {
  for (auto m : {ExperimentMode::kPower, ExperimentMode::kRisk, ExperimentMode::kCalibrate, ExperimentMode::kHistogram,
                 ExperimentMode::kAudit}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown experiment mode '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

template <typename T>
std::vector<T> scalar_or_list(const json& j, const char* key) {
  const json& v = j.at(key);
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(e.get<T>());
  } else {
    out.push_back(v.get<T>());
  }
  return out;
}

std::uint64_t parse_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw std::invalid_argument("config: seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("config: malformed seed '" + s + "'");
    return out;
  }
  throw std::invalid_argument("config: seed must be an integer");
}

StarMethod parse_star_method(const std::string& s) {
  if (s == "exact") return StarMethod::kExact;
  if (s == "greedy") return StarMethod::kGreedy;
  throw std::invalid_argument("config: star_method must be 'exact' or 'greedy'");
}

ThresholdSource parse_source(const std::string& s) {
  if (s == "analytic") return ThresholdSource::kAnalytic;
  if (s == "monte_carlo" || s == "mc") return ThresholdSource::kMonteCarlo;
  throw std::invalid_argument("config: threshold source must be 'analytic' or 'monte_carlo'");
}

constexpr auto purpose(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

// Seed of one (n, d, np) model point, shared by every k so that calibration
// nulls do not depend on the botnet grid.
std::uint64_t point_seed(std::uint64_t master, const GridPoint& gp) {
  return derive_seed(master, {gp.n, static_cast<std::uint64_t>(gp.d), std::bit_cast<std::uint64_t>(gp.np)});
}

std::uint64_t botnet_point_seed(std::uint64_t master, const GridPoint& gp) {
  return derive_seed(point_seed(master, gp), {gp.k});
}

std::size_t workers_of(const RunContext& ctx) { return ctx.workers == 0 ? default_worker_count() : ctx.workers; }

std::string describe(const GridPoint& gp) {
  return "n=" + std::to_string(gp.n) + " d=" + std::to_string(gp.d) + " np=" + format_double(gp.np) +
         " k=" + std::to_string(gp.k);
}

void log_line(const RunContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n' << std::flush;
}

// Normalized parameters, or nullopt with a warning for infeasible points.
std::optional<NormalizedParams> feasible(const GridPoint& gp, const RunContext& ctx) {
  try {
    return gp.model().normalize();
  } catch (const InfeasibleParams& e) {
    log_line(ctx, "warning: skipping infeasible grid point " + describe(gp) + ": " + e.what());
    return std::nullopt;
  }
}

bool wants(const ExperimentConfig& c, Statistic s) {
  return std::find(c.statistics.begin(), c.statistics.end(), s) != c.statistics.end();
}

bool wants(const ExperimentConfig& c, ThresholdSource s) {
  return std::find(c.threshold_sources.begin(), c.threshold_sources.end(), s) != c.threshold_sources.end();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Statistics of one sampled graph. NaN marks an undefined or unrequested value.
struct Observation {
  double star = kNaN;
  double distance = kNaN;
  // Analytic thresholds from estimated parameters; NaN when unavailable.
  double star_threshold = kNaN;
  double distance_threshold = kNaN;
};

Observation observe(const ExperimentConfig& c, const Graph& g, std::uint64_t sample_seed, bool analytic) {
  Observation o;
  const StarOptions star{c.star_method, c.exact_cap};
  const DistanceOptions distance{c.distance_sample_pairs, derive_seed(sample_seed, {purpose(StreamPurpose::kPairSampling)})};
  if (wants(c, Statistic::kMaxStar)) o.star = evaluate_statistic(Statistic::kMaxStar, g, star, distance);
  if (wants(c, Statistic::kAverageDistance)) {
    try {
      o.distance = evaluate_statistic(Statistic::kAverageDistance, g, star, distance);
    } catch (const UndefinedStatistic&) {
    }
  }
  if (analytic) {
    try {
      const EstimationReport est = estimate_parameters(g, c.d_max);
      o.star_threshold = static_cast<double>(geometry::kissing_number(est.d_hat));
      if (est.r_hat) o.distance_threshold = average_distance_threshold(est.d_hat, *est.r_hat, c.epsilon);
    } catch (const UndefinedStatistic&) {
    }
  }
  return o;
}

double value_of(const Observation& o, Statistic s) { return s == Statistic::kMaxStar ? o.star : o.distance; }
double analytic_threshold_of(const Observation& o, Statistic s) {
  return s == Statistic::kMaxStar ? o.star_threshold : o.distance_threshold;
}

// NaN statistics or thresholds never reject.
bool rejects_nan_safe(Statistic s, double value, double threshold) {
  if (std::isnan(value) || std::isnan(threshold)) return false;
  return rejects(s, value, threshold);
}

std::vector<Observation> observe_samples(const ExperimentConfig& c, const ModelParams& model, std::size_t count,
                                         std::uint64_t seed, StreamPurpose stream, bool analytic,
                                         const RunContext& ctx) {
  return parallel_map(
      count,
      [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, {purpose(stream), i});
        const SampleOutput sample = sample_model(model, s);
        return observe(c, sample.graph, s, analytic);
      },
      workers_of(ctx));
}

std::vector<double> defined_values(const std::vector<Observation>& obs, Statistic s) {
  std::vector<double> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    const double v = value_of(o, s);
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

PowerRow make_row(const GridPoint& gp, Statistic s, ThresholdSource src, std::optional<double> alpha,
                  std::optional<double> threshold, const std::vector<Observation>& obs) {
  PowerRow row;
  row.point = gp;
  row.test = s;
  row.source = src;
  row.alpha = alpha;
  row.threshold = threshold;
  row.replicates = obs.size();
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& o : obs) {
    const double v = value_of(o, s);
    const double t = threshold ? *threshold : analytic_threshold_of(o, s);
    if (rejects_nan_safe(s, v, t)) ++row.rejections;
    if (!std::isnan(v)) {
      sum += v;
      ++defined;
    }
  }
  row.power = row.replicates ? static_cast<double>(row.rejections) / static_cast<double>(row.replicates) : 0.0;
  row.ci = wilson_interval(row.rejections, row.replicates);
  row.mean_statistic = defined ? sum / static_cast<double>(defined) : kNaN;
  return row;
}

// Calibrates on null samples at the model point of gp (k ignored) and returns
// one table per requested statistic.
std::map<Statistic, CalibrationTable> calibrate_point(const ExperimentConfig& c, const GridPoint& gp,
                                                      const NormalizedParams& params, const RunContext& ctx) {
  GridPoint null_point = gp;
  null_point.k = 0;
  log_line(ctx, "calibrating " + describe(null_point) + " with " + std::to_string(c.calibration_replicates) + " nulls");
  const auto obs = observe_samples(c, null_point.model(), c.calibration_replicates, point_seed(c.seed, gp),
                                   StreamPurpose::kCalibration, false, ctx);
  NormalizedParams null_params = params;
  null_params.k = 0;
  std::map<Statistic, CalibrationTable> tables;
  for (Statistic s : c.statistics) {
    auto values = defined_values(obs, s);
    if (values.empty()) throw UndefinedStatistic("calibration: statistic undefined on every null sample");
    tables.emplace(s, make_calibration_table(s, null_params, std::move(values), c.alpha));
  }
  return tables;
}

// Everything a calibration depends on besides the grid point.
std::string calibration_settings(const ExperimentConfig& c) {
  std::string key = std::to_string(c.seed) + '|' + std::to_string(c.calibration_replicates) + '|' +
                    std::to_string(static_cast<int>(c.star_method)) + '|' + std::to_string(c.exact_cap) + '|' +
                    std::to_string(c.distance_sample_pairs) + '|';
  for (double a : c.alpha) key += format_double(a) + ',';
  key += '|';
  for (Statistic s : c.statistics) key += std::string(to_string(s)) + ',';
  return key;
}

// Shared body of the power sweep and the null audit.
std::vector<PowerRow> rejection_sweep(const ExperimentConfig& config, const RunContext& ctx, bool audit) {
  config.validate();
  const bool analytic = wants(config, ThresholdSource::kAnalytic);
  const bool mc = wants(config, ThresholdSource::kMonteCarlo);
  std::vector<PowerRow> rows;
  CalibrationCache local;
  CalibrationCache& cache = ctx.calibrations ? *ctx.calibrations : local;
  const std::string settings = calibration_settings(config);
  if (cache.settings != settings) {
    cache.tables.clear();
    cache.settings = settings;
  }
  auto& calibrations = cache.tables;

  for (GridPoint gp : config.grid()) {
    if (audit) gp.k = 0;
    const auto params = feasible(gp, ctx);
    if (!params) continue;
    if (audit && std::any_of(rows.begin(), rows.end(), [&](const PowerRow& r) {
          return r.point.n == gp.n && r.point.d == gp.d && r.point.np == gp.np;
        })) {
      continue;  // k collapses to 0, so the point was already audited
    }

    const std::map<Statistic, CalibrationTable>* tables = nullptr;
    if (mc) {
      const auto key = std::make_tuple(gp.n, gp.d, gp.np);
      auto it = calibrations.find(key);
      if (it == calibrations.end()) it = calibrations.emplace(key, calibrate_point(config, gp, *params, ctx)).first;
      tables = &it->second;
    }

    log_line(ctx, std::string(audit ? "auditing " : "power ") + describe(gp) + " with " +
                      std::to_string(config.replicates) + " replicates");
    const std::uint64_t seed = audit ? point_seed(config.seed, gp) : botnet_point_seed(config.seed, gp);
    const auto obs = observe_samples(config, gp.model(), config.replicates, seed,
                                     audit ? StreamPurpose::kAudit : StreamPurpose::kAlternativeSample, analytic, ctx);

    for (Statistic s : config.statistics) {
      if (analytic) rows.push_back(make_row(gp, s, ThresholdSource::kAnalytic, std::nullopt, std::nullopt, obs));
      if (mc) {
        for (double a : config.alpha) {
          rows.push_back(make_row(gp, s, ThresholdSource::kMonteCarlo, a, tables->at(s).threshold(a), obs));
        }
      }
    }
  }
  return rows;
}

std::string csv_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (!j.contains("seed")) throw std::invalid_argument("config: 'seed' is required");

  ExperimentConfig c;
  try {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    c.n = scalar_or_list<std::size_t>(j, "n");
    c.d = scalar_or_list<int>(j, "d");
    c.np = scalar_or_list<double>(j, "np");
    c.k = j.contains("k") ? scalar_or_list<std::size_t>(j, "k") : std::vector<std::size_t>{0};
    c.seed = parse_seed(j.at("seed"));
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("alpha")) c.alpha = scalar_or_list<double>(j, "alpha");
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("statistics")) {
      c.statistics.clear();
      for (const auto& s : scalar_or_list<std::string>(j, "statistics")) c.statistics.push_back(parse_statistic(s));
    }
    if (j.contains("threshold_sources")) {
      c.threshold_sources.clear();
      for (const auto& s : scalar_or_list<std::string>(j, "threshold_sources")) c.threshold_sources.push_back(parse_source(s));
    }
    if (j.contains("calibration_replicates")) c.calibration_replicates = j.at("calibration_replicates").get<std::size_t>();
    if (j.contains("star_method")) c.star_method = parse_star_method(j.at("star_method").get<std::string>());
    if (j.contains("exact_cap")) c.exact_cap = j.at("exact_cap").get<std::size_t>();
    if (j.contains("distance_sample_pairs")) c.distance_sample_pairs = j.at("distance_sample_pairs").get<std::uint64_t>();
    if (j.contains("d_max")) c.d_max = j.at("d_max").get<int>();
    if (j.contains("distance_bin_width")) c.distance_bin_width = j.at("distance_bin_width").get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = to_string(mode);
  j["n"] = n;
  j["d"] = d;
  j["np"] = np;
  j["k"] = k;
  j["replicates"] = replicates;
  j["alpha"] = alpha;
  j["epsilon"] = epsilon;
  j["seed"] = seed;
  auto& stats = j["statistics"] = nlohmann::ordered_json::array();
  for (auto s : statistics) stats.push_back(to_string(s));
  auto& sources = j["threshold_sources"] = nlohmann::ordered_json::array();
  for (auto s : threshold_sources) sources.push_back(to_string(s));
  j["calibration_replicates"] = calibration_replicates;
  j["star_method"] = star_method == StarMethod::kExact ? "exact" : "greedy";
  j["exact_cap"] = exact_cap;
  j["distance_sample_pairs"] = distance_sample_pairs;
  j["d_max"] = d_max;
  j["distance_bin_width"] = distance_bin_width;
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (n.empty() || d.empty() || np.empty() || k.empty()) throw std::invalid_argument("config: every grid must be nonempty");
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (alpha.empty()) throw std::invalid_argument("config: alpha list must be nonempty");
  for (double a : alpha) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("config: alpha must lie in (0, 1)");
  }
  for (auto v : n) {
    if (v < 2) throw std::invalid_argument("config: n must be >= 2");
  }
  for (int v : d) {
    if (v < 2) throw std::invalid_argument("config: d must be >= 2");
  }
  for (double v : np) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument("config: np must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("config: epsilon must lie in (0, 1)");
  if (statistics.empty()) throw std::invalid_argument("config: no statistic selected");
  if (threshold_sources.empty()) throw std::invalid_argument("config: no threshold source selected");
  if (std::find(threshold_sources.begin(), threshold_sources.end(), ThresholdSource::kMonteCarlo) !=
          threshold_sources.end() &&
      calibration_replicates < 100) {
    throw std::invalid_argument("config: calibration_replicates must be >= 100");
  }
  if (exact_cap > kMaxExactCap) throw std::invalid_argument("config: exact_cap exceeds 64");
  if (d_max < 2) throw std::invalid_argument("config: d_max must be >= 2");
  if (distance_bin_width < 0.0) throw std::invalid_argument("config: distance_bin_width must be >= 0");
}

std::vector<GridPoint> ExperimentConfig::grid() const {
  std::vector<GridPoint> out;
  for (auto nv : n) {
    for (int dv : d) {
      for (double npv : np) {
        for (auto kv : k) out.push_back({nv, dv, npv, kv});
      }
    }
  }
  return out;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  // Rounding can push the bounds past the estimate at the extremes.
  return {std::clamp(std::min(center - half, phat), 0.0, 1.0), std::clamp(std::max(center + half, phat), 0.0, 1.0)};
}

std::vector<PowerRow> run_power_sweep(const ExperimentConfig& config, const RunContext& ctx) {
  return rejection_sweep(config, ctx, false);
}

std::vector<PowerRow> run_null_calibration_audit(const ExperimentConfig& config, const RunContext& ctx) {
  return rejection_sweep(config, ctx, true);
}

std::vector<CalibrationTable> run_calibration(const ExperimentConfig& config, const RunContext& ctx) {
  config.validate();
  if (config.calibration_replicates < 100) throw std::invalid_argument("config: calibration_replicates must be >= 100");
  std::vector<CalibrationTable> out;
  std::vector<std::tuple<std::size_t, int, double>> seen;
  for (const GridPoint& gp : config.grid()) {
    const auto key = std::make_tuple(gp.n, gp.d, gp.np);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    const auto params = feasible(gp, ctx);
    if (!params) continue;
    for (auto& [stat, table] : calibrate_point(config, gp, *params, ctx)) out.push_back(std::move(table));
  }
  return out;
}

std::vector<HistogramBin> run_histogram(const ExperimentConfig& config, const RunContext& ctx) {
  config.validate();
  const double alpha = config.alpha.front();
  std::vector<HistogramBin> bins;
  for (const GridPoint& gp : config.grid()) {
    const auto params = feasible(gp, ctx);
    if (!params) continue;
    log_line(ctx, "histogram " + describe(gp) + " with " + std::to_string(config.replicates) + " samples per hypothesis");
    GridPoint null_point = gp;
    null_point.k = 0;
    const auto null_obs = observe_samples(config, null_point.model(), config.replicates, point_seed(config.seed, gp),
                                          StreamPurpose::kHistogramNull, false, ctx);
    const auto alt_obs = observe_samples(config, gp.model(), config.replicates, botnet_point_seed(config.seed, gp),
                                         StreamPurpose::kHistogramAlternative, false, ctx);

    for (Statistic s : config.statistics) {
      auto null_values = defined_values(null_obs, s);
      const auto alt_values = defined_values(alt_obs, s);
      if (null_values.empty() && alt_values.empty()) continue;
      std::sort(null_values.begin(), null_values.end());
      const double threshold = null_values.empty() ? kNaN : empirical_threshold(s, null_values, alpha);

      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const std::vector<double>* vs : {static_cast<const std::vector<double>*>(&null_values), &alt_values}) {
        for (double v : *vs) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      double width = 1.0;
      if (s == Statistic::kAverageDistance) {
        width = config.distance_bin_width > 0.0 ? config.distance_bin_width : (hi - lo) / 40.0;
        if (!(width > 0.0)) width = 1e-3;
      }
      const double origin = std::floor(lo / width);
      const auto nbins = static_cast<std::size_t>(std::floor(hi / width) - origin) + 1;

      for (bool alternative : {false, true}) {
        std::vector<std::size_t> counts(nbins, 0);
        for (double v : alternative ? alt_values : null_values) {
          auto b = static_cast<std::size_t>(std::floor(v / width) - origin);
          counts[std::min(b, nbins - 1)]++;
        }
        for (std::size_t b = 0; b < nbins; ++b) {
          HistogramBin bin;
          bin.point = gp;
          bin.statistic = s;
          bin.alternative = alternative;
          bin.lower = (origin + static_cast<double>(b)) * width;
          bin.upper = (origin + static_cast<double>(b) + 1.0) * width;
          bin.count = counts[b];
          bin.threshold = threshold;
          bin.alpha = alpha;
          bins.push_back(bin);
        }
      }
    }
  }
  return bins;
}

std::vector<RiskRow> run_risk_sweep(const ExperimentConfig& config, const RunContext& ctx) {
  config.validate();
  std::vector<RiskRow> rows;
  const StarOptions star{config.star_method, config.exact_cap};
  for (const GridPoint& gp : config.grid()) {
    if (gp.k < 1) throw std::invalid_argument("risk sweep: every k must be >= 1");
    const auto params = feasible(gp, ctx);
    if (!params) continue;
    if (gp.k >= gp.n) throw std::invalid_argument("risk sweep: requires k < n");
    log_line(ctx, "risk " + describe(gp) + " with " + std::to_string(config.replicates) + " replicates");
    const std::uint64_t seed = botnet_point_seed(config.seed, gp);
    struct Outcome {
      double risk = 0.0;
      double topk = 0.0;
      double suspects = 0.0;
    };
    const auto outcomes = parallel_map(
        config.replicates,
        [&](std::size_t i) {
          const std::uint64_t s = derive_seed(seed, {purpose(StreamPurpose::kRiskSample), i});
          const SampleOutput sample = sample_alternative(gp.model(), s);
          const BotnetEstimate est = identify_botnet(sample.graph, gp.d, gp.k, params->p, config.epsilon, star);
          return Outcome{identification_risk(est.suspects, sample.botnet).value,
                         identification_risk(est.topk_suspects, sample.botnet).value,
                         static_cast<double>(est.suspects.size())};
        },
        workers_of(ctx));

    RiskRow row;
    row.point = gp;
    row.epsilon = config.epsilon;
    row.replicates = outcomes.size();
    row.xi = xi_threshold(gp.n, gp.k, params->p, config.epsilon);
    const double count = static_cast<double>(outcomes.size());
    for (const auto& o : outcomes) {
      row.mean_risk += o.risk;
      row.mean_topk_risk += o.topk;
      row.mean_suspects += o.suspects;
    }
    row.mean_risk /= count;
    row.mean_topk_risk /= count;
    row.mean_suspects /= count;
    if (outcomes.size() > 1) {
      double ss = 0.0;
      for (const auto& o : outcomes) ss += (o.risk - row.mean_risk) * (o.risk - row.mean_risk);
      row.std_error = std::sqrt(ss / (count - 1.0) / count);
    }
    rows.push_back(row);
  }
  return rows;
}

IsolationProbe run_isolation_probe(std::size_t n, double np, std::size_t k, std::size_t replicates, std::uint64_t seed,
                                   int d, const RunContext& ctx) {
  if (k < 1 || k > n) throw std::invalid_argument("isolation probe: requires 1 <= k <= n");
  if (replicates < 1) throw std::invalid_argument("isolation probe: replicates must be >= 1");
  if (!std::isfinite(np) || np < 0.0) throw std::invalid_argument("isolation probe: np must be >= 0");

  IsolationProbe out;
  out.replicates = replicates;
  const double p = np / static_cast<double>(n);
  const double kd = static_cast<double>(k);
  out.asymptotic_reference = std::exp(-np * kd);
  out.exact_reference = std::pow(1.0 - p, kd * (static_cast<double>(n) - 1.0) - kd * (kd - 1.0) / 2.0);
  if (np == 0.0) {
    // No pair can be joined, so every botnet vertex is isolated in every sample.
    out.all_isolated = replicates;
    out.frequency = 1.0;
    return out;
  }

  const ModelParams model{n, d, Density::average_degree(np), k};
  model.normalize();
  const auto isolated = parallel_map(
      replicates,
      [&](std::size_t i) {
        const SampleOutput sample =
            sample_alternative(model, derive_seed(seed, {purpose(StreamPurpose::kIsolationProbe), i}));
        return static_cast<char>(std::all_of(sample.botnet.begin(), sample.botnet.end(),
                                             [&](VertexId b) { return sample.graph.degree(b) == 0; }));
      },
      workers_of(ctx));
  out.all_isolated = static_cast<std::size_t>(std::count(isolated.begin(), isolated.end(), char{1}));
  out.frequency = static_cast<double>(out.all_isolated) / static_cast<double>(replicates);
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_power_csv(const std::vector<PowerRow>& rows, std::ostream& out) {
  out << "d,n,np,k,test,threshold_source,alpha,threshold,replicates,rejections,power,ci_lo,ci_hi,mean_statistic\n";
  for (const auto& r : rows) {
    out << r.point.d << ',' << r.point.n << ',' << format_double(r.point.np) << ',' << r.point.k << ','
        << to_string(r.test) << ',' << to_string(r.source) << ',' << csv_optional(r.alpha) << ','
        << csv_optional(r.threshold) << ',' << r.replicates << ',' << r.rejections << ',' << format_double(r.power)
        << ',' << format_double(r.ci.lo) << ',' << format_double(r.ci.hi) << ',' << format_double(r.mean_statistic)
        << '\n';
  }
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out) {
  out << "d,n,np,k,statistic,hypothesis,bin_lower,bin_upper,count,threshold,alpha\n";
  for (const auto& b : bins) {
    out << b.point.d << ',' << b.point.n << ',' << format_double(b.point.np) << ',' << b.point.k << ','
        << to_string(b.statistic) << ',' << (b.alternative ? "alternative" : "null") << ',' << format_double(b.lower)
        << ',' << format_double(b.upper) << ',' << b.count << ',' << format_double(b.threshold) << ','
        << format_double(b.alpha) << '\n';
  }
}

void write_risk_csv(const std::vector<RiskRow>& rows, std::ostream& out) {
  out << "d,n,np,k,epsilon,replicates,mean_risk,std_error,mean_topk_risk,mean_suspects,xi\n";
  for (const auto& r : rows) {
    out << r.point.d << ',' << r.point.n << ',' << format_double(r.point.np) << ',' << r.point.k << ','
        << format_double(r.epsilon) << ',' << r.replicates << ',' << format_double(r.mean_risk) << ','
        << format_double(r.std_error) << ',' << format_double(r.mean_topk_risk) << ','
        << format_double(r.mean_suspects) << ',' << format_double(r.xi) << '\n';
  }
}

}  // namespace botdetect
