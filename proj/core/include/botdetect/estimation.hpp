#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "botdetect/graph.hpp"

namespace botdetect {

inline constexpr int kDefaultMaxDimension = 64;

/// Clustering coefficient of the torus random geometric graph in dimension d:
/// P(Beta((d+1)/2, 1/2) <= 3/4) + P(Beta((d+1)/2, (d+1)/2) <= 1/4).
double analytic_clustering(int d);

struct TriangleCounts {
  std::uint64_t triangles = 0;
  /// Paths of length two counted once per (center, unordered endpoint pair).
  std::uint64_t wedges = 0;
};

/// Triangles by sorted-adjacency intersection over each edge.
TriangleCounts count_triangles(const Graph& g);

/// Closed ordered triples over ordered triples (i, j, k) with i~j, i~k and
/// i, j, k pairwise distinct, which equals 3 * triangles / wedges.
/// Throws UndefinedStatistic when the graph has no wedge.
double empirical_clustering(const Graph& g);

/// d in [2, d_max] whose analytic clustering is nearest to `clustering`; ties
/// resolve to the smaller d.
int dimension_from_clustering(double clustering, int d_max = kDefaultMaxDimension);

/// dimension_from_clustering(empirical_clustering(g), d_max).
int estimate_dimension(const Graph& g, int d_max = kDefaultMaxDimension);

/// m / (n choose 2). Requires n >= 2.
double estimate_edge_probability(const Graph& g);

/// radius_for_probability(estimate_edge_probability(g), d_hat).
double estimate_radius(const Graph& g, int d_hat);

struct EstimationReport {
  double c_hat = 0.0;
  int d_hat = 2;
  double p_hat = 0.0;
  /// Absent when p_hat is 0 or too large for d_hat; see r_hat_error.
  std::optional<double> r_hat;
  std::string r_hat_error;
  std::uint64_t triangle_count = 0;
  std::uint64_t wedge_count = 0;
  int d_max = kDefaultMaxDimension;

  std::string to_json() const;
};

/// All estimators at once. Throws UndefinedStatistic when there are no wedges.
EstimationReport estimate_parameters(const Graph& g, int d_max = kDefaultMaxDimension);

}  // namespace botdetect
