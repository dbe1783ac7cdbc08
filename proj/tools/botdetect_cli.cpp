// botdetect: sample geometric graphs with planted botnets, run the detection
// tests, estimate model parameters and drive the simulation sweeps.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "botdetect/detection.hpp"
#include "botdetect/error.hpp"
#include "botdetect/estimation.hpp"
#include "botdetect/experiment.hpp"
#include "botdetect/geometry.hpp"
#include "botdetect/identification.hpp"
#include "botdetect/sampler.hpp"

namespace bd = botdetect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

struct DensityFlags {
  std::optional<double> np;
  std::optional<double> p;
  std::optional<double> r;

  void add(CLI::App* cmd) {
    auto* a = cmd->add_option("--np", np, "Average degree n*p");
    auto* b = cmd->add_option("--p", p, "Edge probability");
    auto* c = cmd->add_option("--r", r, "Connection radius");
    a->excludes(b)->excludes(c);
    b->excludes(c);
  }

  bd::Density resolve() const {
    if (np) return bd::Density::average_degree(*np);
    if (p) return bd::Density::edge_probability(*p);
    if (r) return bd::Density::radius(*r);
    throw std::invalid_argument("one of --np, --p or --r is required");
  }
};

// Opens `path` for writing, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::invalid_argument("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bd::Graph load_graph(const std::string& path) {
  if (path == "-") return bd::read_edge_list(std::cin);
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return bd::read_edge_list(in);
}

bd::StarMethod parse_star_method(const std::string& s) {
  return s == "exact" ? bd::StarMethod::kExact : bd::StarMethod::kGreedy;
}

nlohmann::ordered_json verdict_json(const bd::TestVerdict& v) {
  nlohmann::ordered_json j;
  j["test"] = bd::to_string(v.statistic_kind);
  j["statistic"] = v.statistic;
  j["threshold"] = v.threshold;
  j["threshold_source"] = bd::to_string(v.threshold_source);
  j["reject"] = v.reject;
  if (v.all_connected) j["all_connected"] = *v.all_connected;
  if (v.statistic_kind == bd::Statistic::kMaxStar) j["greedy_fallbacks"] = v.greedy_fallbacks;
  return j;
}

bd::RunContext run_context(bool quiet) {
  bd::RunContext ctx;
  ctx.log = quiet ? nullptr : &std::cerr;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Botnet detection in random geometric graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a null or botnet graph");
  std::size_t gen_n = 0;
  int gen_d = 2;
  std::size_t gen_k = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "-";
  std::string gen_locations;
  std::string gen_botnet;
  DensityFlags gen_density;
  gen->add_option("--n", gen_n, "Number of vertices")->required();
  gen->add_option("--d", gen_d, "Torus dimension")->required();
  gen->add_option("--k", gen_k, "Botnet size (0 = null model)");
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("--out", gen_out, "Edge list output ('-' = stdout)");
  gen->add_option("--locations", gen_locations, "Write vertex locations to this file");
  gen->add_option("--botnet", gen_botnet, "Write botnet vertex ids to this file");
  gen_density.add(gen);

  // detect
  auto* det = app.add_subcommand("detect", "Run the isolated star and average distance tests");
  std::string det_graph;
  std::string det_test = "both";
  std::optional<int> det_d;
  std::optional<double> det_r;
  double det_epsilon = 0.1;
  std::string det_calibration;
  std::vector<double> det_alpha{0.05};
  bool det_estimate = false;
  std::string det_star_method = "exact";
  std::size_t det_cap = bd::kDefaultExactCap;
  std::uint64_t det_pairs = 0;
  std::uint64_t det_seed = 0;
  det->add_option("graph", det_graph, "Edge list file ('-' = stdin)")->required();
  det->add_option("--test", det_test, "star, distance or both")->check(CLI::IsMember({"star", "distance", "both"}));
  det->add_option("--d", det_d, "Torus dimension (estimated when absent)");
  det->add_option("--r", det_r, "Connection radius (estimated when absent)");
  det->add_option("--epsilon", det_epsilon, "Average distance test slack");
  det->add_option("--calibration", det_calibration, "Monte Carlo calibration table (JSON) for the threshold");
  det->add_option("--alpha", det_alpha, "Significance level used with --calibration")->expected(1);
  det->add_flag("--estimate-params", det_estimate, "Estimate d and r from the graph even when given");
  det->add_option("--star-method", det_star_method, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}));
  det->add_option("--exact-cap", det_cap, "Largest neighborhood solved exactly");
  det->add_option("--sample-pairs", det_pairs, "Estimate the average distance from this many random pairs");
  auto* det_seed_opt = det->add_option("--seed", det_seed, "Seed for pair sampling (required with --sample-pairs)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate dimension, edge probability and radius");
  std::string est_graph;
  int est_dmax = bd::kDefaultMaxDimension;
  est->add_option("graph", est_graph, "Edge list file ('-' = stdin)")->required();
  est->add_option("--d-max", est_dmax, "Largest dimension considered");

  // identify
  auto* idn = app.add_subcommand("identify", "Flag botnet suspects by isolated star size");
  std::string idn_graph;
  std::size_t idn_k = 0;
  double idn_epsilon = 0.1;
  std::optional<double> idn_p;
  std::optional<int> idn_d;
  std::string idn_out;
  std::string idn_report = "-";
  std::string idn_star_method = "exact";
  std::size_t idn_cap = bd::kDefaultExactCap;
  idn->add_option("graph", idn_graph, "Edge list file ('-' = stdin)")->required();
  idn->add_option("--k", idn_k, "Botnet size")->required();
  idn->add_option("--epsilon", idn_epsilon, "Threshold slack");
  idn->add_option("--p", idn_p, "Edge probability (estimated when absent)");
  idn->add_option("--d", idn_d, "Torus dimension (estimated when absent)");
  idn->add_option("--out", idn_out, "Write suspect ids, one per line");
  idn->add_option("--report", idn_report, "JSON report ('-' = stdout)");
  idn->add_option("--star-method", idn_star_method, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}));
  idn->add_option("--exact-cap", idn_cap, "Largest neighborhood solved exactly");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo null distribution of one statistic");
  std::size_t cal_n = 0;
  int cal_d = 2;
  std::string cal_stat = "max_star";
  std::vector<double> cal_alpha{0.05};
  std::size_t cal_replicates = 1000;
  std::uint64_t cal_seed = 0;
  std::string cal_out = "-";
  std::string cal_star_method = "greedy";
  std::uint64_t cal_pairs = 0;
  bool cal_no_samples = false;
  DensityFlags cal_density;
  cal->add_option("--n", cal_n, "Number of vertices")->required();
  cal->add_option("--d", cal_d, "Torus dimension")->required();
  cal_density.add(cal);
  cal->add_option("--statistic", cal_stat, "max_star or avg_distance");
  cal->add_option("--alpha", cal_alpha, "Significance levels");
  cal->add_option("--replicates", cal_replicates, "Null samples (>= 100)");
  cal->add_option("--seed", cal_seed, "Random seed")->required();
  cal->add_option("--out", cal_out, "JSON output ('-' = stdout)");
  cal->add_option("--star-method", cal_star_method, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}));
  cal->add_option("--sample-pairs", cal_pairs, "Estimate the average distance from this many random pairs");
  cal->add_flag("--no-samples", cal_no_samples, "Omit the raw null samples from the output");

  // sweeps
  std::string sweep_config;
  std::string sweep_out = "-";
  auto add_sweep = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", sweep_config, "Experiment configuration (JSON)")->required();
    cmd->add_option("--out", sweep_out, "CSV output ('-' = stdout)");
    return cmd;
  };
  auto* pow = add_sweep("power", "Power sweep over a parameter grid");
  auto* aud = add_sweep("audit", "Type-1 error audit on fresh null samples");
  auto* rsk = add_sweep("risk", "Identification risk sweep");
  auto* hst = add_sweep("histogram", "Null and alternative histograms of both statistics");

  // isolation probe
  auto* prb = app.add_subcommand("probe", "Frequency that every botnet vertex is isolated");
  std::size_t prb_n = 10000;
  double prb_np = 1.0;
  std::size_t prb_k = 1;
  std::size_t prb_replicates = 1000;
  std::uint64_t prb_seed = 0;
  int prb_d = 2;
  prb->add_option("--n", prb_n, "Number of vertices");
  prb->add_option("--np", prb_np, "Average degree n*p");
  prb->add_option("--k", prb_k, "Botnet size");
  prb->add_option("--d", prb_d, "Torus dimension");
  prb->add_option("--replicates", prb_replicates, "Samples");
  prb->add_option("--seed", prb_seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen) {
      const bd::ModelParams model{gen_n, gen_d, gen_density.resolve(), gen_k};
      const bd::SampleOutput sample = bd::sample_model(model, gen_seed);
      Output out(gen_out);
      bd::write_edge_list(sample.graph, out.stream());
      if (!gen_locations.empty()) {
        Output loc(gen_locations);
        bd::write_locations(sample.locations, loc.stream());
      }
      if (!gen_botnet.empty()) {
        Output bot(gen_botnet);
        bd::write_botnet(sample.botnet, bot.stream());
      }
    } else if (*det) {
      if (det_pairs > 0 && det_seed_opt->count() == 0) throw std::invalid_argument("detect: --sample-pairs needs --seed");
      const bd::Graph g = load_graph(det_graph);
      nlohmann::ordered_json report;
      int d = det_d.value_or(0);
      double r = det_r.value_or(0.0);
      if (det_estimate || !det_d || !det_r) {
        const bd::EstimationReport e = bd::estimate_parameters(g);
        if (det_estimate || !det_d) d = e.d_hat;
        if (det_estimate || !det_r) {
          r = det_estimate || !det_d ? e.r_hat.value_or(0.0)
                                     : bd::geometry::radius_for_probability(e.p_hat, d);
        }
        report["estimated"] = nlohmann::ordered_json::parse(e.to_json());
      }
      report["d"] = d;
      report["r"] = r;

      std::optional<bd::CalibrationTable> table;
      if (!det_calibration.empty()) table = bd::CalibrationTable::from_json(read_text(det_calibration));
      const bd::StarOptions star{parse_star_method(det_star_method), det_cap};
      const bd::DistanceOptions dist{det_pairs, det_seed};

      auto& tests = report["tests"] = nlohmann::ordered_json::array();
      auto run = [&](bd::Statistic stat) {
        bd::TestVerdict v;
        if (table && table->stat == stat) {
          v = bd::verdict_from_threshold(stat, bd::evaluate_statistic(stat, g, star, dist),
                                         table->threshold(det_alpha.front()), bd::ThresholdSource::kMonteCarlo);
        } else if (stat == bd::Statistic::kMaxStar) {
          v = bd::isolated_star_test(g, d, star);
        } else {
          if (!(r > 0.0)) throw bd::InfeasibleParams("detect: no usable radius for the average distance test");
          v = bd::average_distance_test(g, d, r, det_epsilon, dist);
        }
        tests.push_back(verdict_json(v));
      };
      if (det_test != "distance") run(bd::Statistic::kMaxStar);
      if (det_test != "star") run(bd::Statistic::kAverageDistance);
      std::cout << report.dump(2) << '\n';
    } else if (*est) {
      std::cout << bd::estimate_parameters(load_graph(est_graph), est_dmax).to_json() << '\n';
    } else if (*idn) {
      const bd::Graph g = load_graph(idn_graph);
      const double p = idn_p ? *idn_p : bd::estimate_edge_probability(g);
      const int d = idn_d ? *idn_d : bd::estimate_dimension(g);
      const bd::BotnetEstimate e =
          bd::identify_botnet(g, d, idn_k, p, idn_epsilon, {parse_star_method(idn_star_method), idn_cap});
      if (!idn_out.empty()) {
        Output out(idn_out);
        bd::write_botnet(e.suspects, out.stream());
      }
      // Record which inputs were plugged in from estimates.
      nlohmann::ordered_json rep_json = nlohmann::ordered_json::parse(e.to_json());
      rep_json["p"] = p;
      rep_json["p_source"] = idn_p ? "given" : "estimated";
      rep_json["d"] = d;
      rep_json["d_source"] = idn_d ? "given" : "estimated";
      rep_json["k"] = idn_k;
      if (!quiet && (!idn_p || !idn_d)) {
        std::cerr << "identify: using estimated " << (!idn_p ? "p" : "") << (!idn_p && !idn_d ? " and " : "")
                  << (!idn_d ? "d" : "") << " (p=" << p << ", d=" << d << ")\n";
      }
      Output rep(idn_report);
      rep.stream() << rep_json.dump(2) << '\n';
    } else if (*cal) {
      const bd::ModelParams model{cal_n, cal_d, cal_density.resolve(), 0};
      const bd::CalibrationTable table = bd::monte_carlo_threshold(
          bd::parse_statistic(cal_stat), model, cal_replicates, cal_alpha, cal_seed,
          {parse_star_method(cal_star_method), bd::kDefaultExactCap}, {cal_pairs, 0});
      Output out(cal_out);
      out.stream() << table.to_json(!cal_no_samples) << '\n';
    } else if (*pow || *aud || *rsk || *hst) {
      const bd::ExperimentConfig config = bd::ExperimentConfig::from_json(read_text(sweep_config));
      const bd::RunContext ctx = run_context(quiet);
      Output out(sweep_out);
      if (*pow) bd::write_power_csv(bd::run_power_sweep(config, ctx), out.stream());
      if (*aud) bd::write_power_csv(bd::run_null_calibration_audit(config, ctx), out.stream());
      if (*rsk) bd::write_risk_csv(bd::run_risk_sweep(config, ctx), out.stream());
      if (*hst) bd::write_histogram_csv(bd::run_histogram(config, ctx), out.stream());
    } else if (*prb) {
      const bd::IsolationProbe r =
          bd::run_isolation_probe(prb_n, prb_np, prb_k, prb_replicates, prb_seed, prb_d, run_context(quiet));
      nlohmann::ordered_json j;
      j["replicates"] = r.replicates;
      j["all_isolated"] = r.all_isolated;
      j["frequency"] = r.frequency;
      j["asymptotic_reference"] = r.asymptotic_reference;
      j["exact_reference"] = r.exact_reference;
      std::cout << j.dump(2) << '\n';
    }
  } catch (const bd::InfeasibleParams& e) {
    std::cerr << "infeasible parameters: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
