#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "botdetect/geometry.hpp"
#include "botdetect/graph.hpp"

namespace botdetect {

/// One of the three equivalent ways of fixing the edge density.
struct Density {
  enum class Kind { kEdgeProbability, kRadius, kAverageDegree };
  Kind kind = Kind::kAverageDegree;
  double value = 0.0;

  static Density edge_probability(double p) { return {Kind::kEdgeProbability, p}; }
  static Density radius(double r) { return {Kind::kRadius, r}; }
  static Density average_degree(double np) { return {Kind::kAverageDegree, np}; }
};

/// Fully resolved model: all density forms present and mutually consistent.
struct NormalizedParams {
  std::size_t n = 0;
  int d = 0;
  std::size_t k = 0;
  double p = 0.0;
  double r = 0.0;

  double average_degree() const noexcept { return p * static_cast<double>(n); }
};

/// Model specification as supplied by a caller. k = 0 is the null model.
struct ModelParams {
  std::size_t n = 0;
  int d = 2;
  Density density;
  std::size_t k = 0;

  /// Resolves the density to (p, r). Average degree maps to p = np / n.
  /// Throws std::invalid_argument for malformed values and InfeasibleParams
  /// when the radius would exceed 1/2.
  NormalizedParams normalize() const;
};

/// n x d row-major matrix of torus coordinates.
class LocationMatrix {
 public:
  LocationMatrix() = default;
  LocationMatrix(std::size_t n, int d) : n_(n), d_(d), data_(n * static_cast<std::size_t>(d)) {}

  std::size_t size() const noexcept { return n_; }
  int dimension() const noexcept { return d_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  geometry::TorusPoint point(std::size_t i) const { return geometry::TorusPoint({row(i).begin(), row(i).end()}); }

 private:
  std::size_t n_ = 0;
  int d_ = 0;
  std::vector<double> data_;
};

struct SampleOutput {
  Graph graph;
  /// All n locations, botnet vertices included (their locations are unused).
  LocationMatrix locations;
  /// Botnet vertex ids, ascending. Empty under the null model.
  std::vector<VertexId> botnet;
  NormalizedParams params;
};

/// Geometric edges among points not flagged in `excluded`: (i, j) is an edge
/// iff torus_distance_squared(loc_i, loc_j) <= r^2. Uses a cell grid with
/// side >= r; falls back to an all-pairs sweep when the grid cannot prune.
std::vector<Edge> geometric_edges(const LocationMatrix& locations, double r, std::span<const char> excluded = {});

/// GRG(n, p, d). Requires params.k == 0.
SampleOutput sample_null(const ModelParams& params, std::uint64_t seed);

/// BRG(n, k, p, d): k uniformly chosen vertices drop their geometric edges and
/// connect to every other vertex independently with probability p.
/// Requires 1 <= k <= n.
SampleOutput sample_alternative(const ModelParams& params, std::uint64_t seed);

/// Dispatches on params.k.
SampleOutput sample_model(const ModelParams& params, std::uint64_t seed);

/// Line i: d space-separated coordinates of vertex i.
void write_locations(const LocationMatrix& locations, std::ostream& out);
/// One vertex id per line.
void write_botnet(std::span<const VertexId> botnet, std::ostream& out);

}  // namespace botdetect
