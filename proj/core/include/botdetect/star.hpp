#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "botdetect/graph.hpp"

namespace botdetect {

/// How isolated-star sizes are computed.
///  kExact:  maximum independent set of the neighborhood, falling back to the
///           greedy bound (flagged) above the degree cap.
///  kGreedy: minimum-residual-degree greedy lower bound, lowest id on ties.
enum class StarMethod { kExact, kGreedy };

inline constexpr std::size_t kDefaultExactCap = 32;
inline constexpr std::size_t kMaxExactCap = 64;

/// Thrown by isolated_star_size(kExact) when degree(v) exceeds the cap.
class ExactCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adjacency of the subgraph induced by a vertex neighborhood, one bit row
/// per neighbor (neighbors indexed in ascending vertex-id order).
class NeighborhoodGraph {
 public:
  NeighborhoodGraph(const Graph& g, VertexId center);
  /// Arbitrary t-vertex graph from an edge list over 0..t-1.
  NeighborhoodGraph(std::size_t t, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return t_; }
  bool adjacent(std::size_t a, std::size_t b) const noexcept {
    return (rows_[a * words_ + b / 64] >> (b % 64)) & 1U;
  }

  /// Greedy independent set size: repeatedly take a minimum residual-degree
  /// vertex (lowest index on ties) and delete its closed neighborhood.
  std::size_t greedy_independent_set() const;

  /// Maximum independent set size by branch and bound. Requires size() <= 64.
  std::size_t maximum_independent_set() const;

 private:
  std::size_t t_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Size of the largest (exact) or a large (greedy) independent set within N(v).
/// Throws ExactCapExceeded for kExact when degree(v) > exact_cap.
std::size_t isolated_star_size(const Graph& g, VertexId v, StarMethod method,
                               std::size_t exact_cap = kDefaultExactCap);

struct IsolatedStarProfile {
  std::vector<std::size_t> per_vertex_star_size;
  std::size_t max_star = 0;
  StarMethod method = StarMethod::kExact;
  /// Vertices whose size came from the greedy fallback under kExact.
  std::size_t greedy_fallbacks = 0;
};

/// Star size at every vertex.
IsolatedStarProfile isolated_star_profile(const Graph& g, StarMethod method, std::size_t exact_cap = kDefaultExactCap);

struct MaxStar {
  std::size_t value = 0;
  VertexId argmax = 0;
  std::size_t greedy_fallbacks = 0;
};

/// max_v star(v), skipping vertices whose degree cannot beat the running max.
MaxStar max_isolated_star(const Graph& g, StarMethod method, std::size_t exact_cap = kDefaultExactCap);

}  // namespace botdetect
