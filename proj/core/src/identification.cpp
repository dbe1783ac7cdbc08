#include "botdetect/identification.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "botdetect/error.hpp"
#include "botdetect/geometry.hpp"
#include "botdetect/numerics.hpp"

namespace botdetect {

double xi_threshold(std::size_t n, std::size_t k, double p, double epsilon) {
  if (k < 1) throw DomainError("xi_threshold: k must be >= 1");
  if (k >= n) throw DomainError("xi_threshold: requires k < n");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("xi_threshold: p must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw DomainError("xi_threshold: epsilon must be > 0");
  const double log_ratio = std::log(static_cast<double>(n) / static_cast<double>(k));
  const double w = numerics::lambert_w0(log_ratio / (static_cast<double>(k) * p * std::numbers::e));
  return std::max(0.0, (1.0 + epsilon) * log_ratio / w);
}

BotnetEstimate identify_botnet(const Graph& g, int d, std::size_t k, double p, double epsilon,
                               const StarOptions& options) {
  BotnetEstimate out;
  out.epsilon = epsilon;
  out.kissing = geometry::kissing_number(d);
  out.xi = xi_threshold(g.num_vertices(), k, p, epsilon);
  out.threshold_used = static_cast<double>(out.kissing) + out.xi;

  const IsolatedStarProfile profile = isolated_star_profile(g, options.method, options.exact_cap);
  out.greedy_fallbacks = profile.greedy_fallbacks;
  const auto& stars = profile.per_vertex_star_size;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (static_cast<double>(stars[v]) > out.threshold_used) out.suspects.push_back(v);
  }

  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), VertexId{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](VertexId a, VertexId b) { return stars[a] != stars[b] ? stars[a] > stars[b] : a < b; });
  out.topk_suspects.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(out.topk_suspects.begin(), out.topk_suspects.end());
  return out;
}

std::string BotnetEstimate::to_json() const {
  nlohmann::ordered_json j;
  j["threshold_used"] = threshold_used;
  j["xi"] = xi;
  j["epsilon"] = epsilon;
  j["kissing_number"] = kissing;
  j["suspects"] = suspects;
  j["topk_suspects"] = topk_suspects;
  j["greedy_fallbacks"] = greedy_fallbacks;
  return j.dump(2);
}

RiskScore identification_risk(std::span<const VertexId> estimate, std::span<const VertexId> truth) {
  std::vector<VertexId> est(estimate.begin(), estimate.end());
  std::vector<VertexId> tru(truth.begin(), truth.end());
  std::sort(est.begin(), est.end());
  est.erase(std::unique(est.begin(), est.end()), est.end());
  std::sort(tru.begin(), tru.end());
  tru.erase(std::unique(tru.begin(), tru.end()), tru.end());
  if (tru.empty()) throw std::invalid_argument("identification_risk: truth set must be nonempty");

  std::vector<VertexId> common;
  std::set_intersection(est.begin(), est.end(), tru.begin(), tru.end(), std::back_inserter(common));
  RiskScore score;
  score.missed = tru.size() - common.size();
  score.false_positive = est.size() - common.size();
  score.value = static_cast<double>(score.missed + score.false_positive) / (2.0 * static_cast<double>(tru.size()));
  return score;
}

}  // namespace botdetect
