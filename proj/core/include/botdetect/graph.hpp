#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace botdetect {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Immutable simple undirected graph in compressed sparse row form.
/// Vertex ids are dense, 0..n-1; neighbor lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Validating constructor: throws std::invalid_argument on self-loops,
  /// duplicate edges (in either orientation) or ids >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  /// Builds from edges already known to be simple and in range. Orientation
  /// of each pair is irrelevant. Used by the samplers.
  static Graph from_simple_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(VertexId u, VertexId v) const;

  /// Each edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  /// Graph with vertex v relabeled to perm[v].
  Graph relabeled(std::span<const VertexId> perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
};

/// Marker for vertices that a BFS did not reach.
inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

/// Hop distances from source; kUnreachable for other components.
/// Throws std::out_of_range if source >= n.
std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source);

/// Component label per vertex, labels dense from 0 in order of first vertex.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* num_components = nullptr);

/// Whether the subgraph induced by `subset` (all vertices when absent) is connected.
bool is_connected(const Graph& g, std::optional<std::span<const VertexId>> subset = std::nullopt);

struct DistanceSummary {
  std::uint64_t connected_pair_count = 0;
  std::uint64_t distance_sum = 0;
  /// distance_sum / connected_pair_count; NaN when there are no connected pairs.
  double average = 0.0;
  bool all_connected = false;
  /// True when the summary is a pair-sampling estimate.
  bool sampled = false;
};

/// Mean shortest-path length over unordered pairs that lie in a common
/// component. Exact: every pair is visited. Throws UndefinedStatistic when
/// the graph has no edges; std::invalid_argument when n < 2.
DistanceSummary average_graph_distance(const Graph& g);

/// Estimate from `pair_count` distinct unordered pairs drawn uniformly without
/// replacement. Pairs in different components are skipped, as in the exact
/// statistic; connected_pair_count then counts the connected sampled pairs.
DistanceSummary average_graph_distance_sampled(const Graph& g, std::uint64_t pair_count, std::uint64_t seed);

/// Text edge list: "n m" header then m lines "u v" (u < v < n); '#' comments.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace botdetect
