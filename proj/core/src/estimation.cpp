#include "botdetect/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

#include "botdetect/error.hpp"
#include "botdetect/geometry.hpp"
#include "botdetect/numerics.hpp"

namespace botdetect {

double analytic_clustering(int d) {
  if (d < 2) throw DomainError("analytic_clustering: dimension must be >= 2");
  const double a = (d + 1.0) / 2.0;
  return numerics::regularized_incomplete_beta(a, 0.5, 0.75) + numerics::regularized_incomplete_beta(a, a, 0.25);
}

namespace {

// C_2..C_{d_max}, grown on demand.
double cached_clustering(int d) {
  static std::mutex mutex;
  static std::vector<double> table;
  std::lock_guard lock(mutex);
  while (static_cast<int>(table.size()) + 2 <= d) table.push_back(analytic_clustering(static_cast<int>(table.size()) + 2));
  return table[static_cast<std::size_t>(d - 2)];
}

}  // namespace

TriangleCounts count_triangles(const Graph& g) {
  TriangleCounts out;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    const auto nu = g.neighbors(u);
    const std::uint64_t deg = nu.size();
    if (deg >= 2) out.wedges += deg * (deg - 1) / 2;
    for (VertexId v : nu) {
      if (v <= u) continue;
      // Common neighbors w > v, so each triangle u < v < w is counted once.
      const auto nv = g.neighbors(v);
      auto i = std::upper_bound(nu.begin(), nu.end(), v);
      auto j = std::upper_bound(nv.begin(), nv.end(), v);
      while (i != nu.end() && j != nv.end()) {
        if (*i < *j) {
          ++i;
        } else if (*j < *i) {
          ++j;
        } else {
          ++out.triangles;
          ++i;
          ++j;
        }
      }
    }
  }
  return out;
}

double empirical_clustering(const Graph& g) {
  const TriangleCounts counts = count_triangles(g);
  if (counts.wedges == 0) throw UndefinedStatistic("empirical_clustering: graph has no wedges");
  return 3.0 * static_cast<double>(counts.triangles) / static_cast<double>(counts.wedges);
}

int dimension_from_clustering(double clustering, int d_max) {
  if (d_max < 2) throw std::invalid_argument("dimension_from_clustering: d_max must be >= 2");
  int best = 2;
  double best_gap = std::abs(cached_clustering(2) - clustering);
  for (int d = 3; d <= d_max; ++d) {
    const double gap = std::abs(cached_clustering(d) - clustering);
    if (gap < best_gap) {
      best = d;
      best_gap = gap;
    }
  }
  return best;
}

int estimate_dimension(const Graph& g, int d_max) { return dimension_from_clustering(empirical_clustering(g), d_max); }

double estimate_edge_probability(const Graph& g) {
  const auto n = static_cast<double>(g.num_vertices());
  if (g.num_vertices() < 2) throw std::invalid_argument("estimate_edge_probability: need at least 2 vertices");
  return static_cast<double>(g.num_edges()) / (n * (n - 1.0) / 2.0);
}

double estimate_radius(const Graph& g, int d_hat) {
  return geometry::radius_for_probability(estimate_edge_probability(g), d_hat);
}

EstimationReport estimate_parameters(const Graph& g, int d_max) {
  EstimationReport report;
  report.d_max = d_max;
  const TriangleCounts counts = count_triangles(g);
  if (counts.wedges == 0) throw UndefinedStatistic("estimate_parameters: graph has no wedges");
  report.triangle_count = counts.triangles;
  report.wedge_count = counts.wedges;
  report.c_hat = 3.0 * static_cast<double>(counts.triangles) / static_cast<double>(counts.wedges);
  report.d_hat = dimension_from_clustering(report.c_hat, d_max);
  report.p_hat = estimate_edge_probability(g);
  try {
    report.r_hat = geometry::radius_for_probability(report.p_hat, report.d_hat);
  } catch (const std::exception& e) {
    report.r_hat_error = e.what();
  }
  return report;
}

std::string EstimationReport::to_json() const {
  nlohmann::ordered_json j;
  j["c_hat"] = c_hat;
  j["d_hat"] = d_hat;
  j["p_hat"] = p_hat;
  if (r_hat) {
    j["r_hat"] = *r_hat;
  } else {
    j["r_hat"] = nullptr;
    j["r_hat_error"] = r_hat_error;
  }
  j["triangle_count"] = triangle_count;
  j["wedge_count"] = wedge_count;
  j["d_max"] = d_max;
  return j.dump(2);
}

}  // namespace botdetect
