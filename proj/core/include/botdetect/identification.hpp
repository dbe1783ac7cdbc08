#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "botdetect/detection.hpp"
#include "botdetect/graph.hpp"

namespace botdetect {

/// Threshold inflation (1 + epsilon) L / W0(L / (k p e)) with L = ln(n / k),
/// floored at 0. Requires n > k >= 1, 0 < p < 1, epsilon > 0.
double xi_threshold(std::size_t n, std::size_t k, double p, double epsilon);

struct BotnetEstimate {
  /// Vertices whose star size exceeds threshold_used, ascending.
  std::vector<VertexId> suspects;
  /// The k largest star sizes (ties to the lower id), ascending by id.
  std::vector<VertexId> topk_suspects;
  double threshold_used = 0.0;
  double xi = 0.0;
  double epsilon = 0.0;
  std::size_t kissing = 0;
  std::size_t greedy_fallbacks = 0;

  std::string to_json() const;
};

/// Suspects = {v : star(v) > kissing_number(d) + xi_threshold(n, k, p, epsilon)}.
BotnetEstimate identify_botnet(const Graph& g, int d, std::size_t k, double p, double epsilon = 0.1,
                               const StarOptions& options = {});

struct RiskScore {
  double value = 0.0;
  std::size_t missed = 0;
  std::size_t false_positive = 0;
};

/// |estimate (symmetric difference) truth| / (2 |truth|), unclamped.
/// Inputs are treated as sets; throws std::invalid_argument on empty truth.
RiskScore identification_risk(std::span<const VertexId> estimate, std::span<const VertexId> truth);

}  // namespace botdetect
