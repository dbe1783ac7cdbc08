#include "botdetect/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "botdetect/error.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

Graph Graph::from_simple_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  return g;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n > std::numeric_limits<VertexId>::max()) throw std::invalid_argument("Graph: too many vertices");
  std::vector<Edge> canonical;
  canonical.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("Graph: vertex id out of range");
    if (u == v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(u));
    canonical.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canonical.begin(), canonical.end());
  if (std::adjacent_find(canonical.begin(), canonical.end()) != canonical.end()) {
    throw std::invalid_argument("Graph: duplicate edge");
  }
  return from_simple_edges(n, canonical);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < num_vertices(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph Graph::relabeled(std::span<const VertexId> perm) const {
  if (perm.size() != num_vertices()) throw std::invalid_argument("relabeled: permutation size mismatch");
  std::vector<Edge> mapped;
  mapped.reserve(num_edges());
  for (VertexId u = 0; u < num_vertices(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) mapped.emplace_back(perm[u], perm[v]);
    }
  }
  return from_simple_edges(num_vertices(), mapped);
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId source) {
  const std::size_t n = g.num_vertices();
  if (source >= n) throw std::out_of_range("bfs_distances: source out of range");
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(n);
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* num_components) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> label(n, kUnreachable);
  std::vector<VertexId> stack;
  std::uint32_t next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kUnreachable) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (VertexId v : g.neighbors(u)) {
        if (label[v] == kUnreachable) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (num_components != nullptr) *num_components = next;
  return label;
}

bool is_connected(const Graph& g, std::optional<std::span<const VertexId>> subset) {
  const std::size_t n = g.num_vertices();
  if (!subset) {
    if (n == 0) return false;
    std::size_t count = 0;
    connected_components(g, &count);
    return count == 1;
  }
  if (subset->empty()) throw std::invalid_argument("is_connected: subset must be nonempty");
  std::vector<char> member(n, 0);
  std::size_t members = 0;
  for (VertexId v : *subset) {
    if (v >= n) throw std::out_of_range("is_connected: vertex out of range");
    if (!member[v]) ++members;
    member[v] = 1;
  }
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{subset->front()};
  seen[subset->front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (VertexId v : g.neighbors(u)) {
      if (member[v] && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == members;
}

namespace {

struct ComponentPairs {
  std::uint64_t connected_pairs = 0;
  bool all_connected = false;
};

ComponentPairs count_component_pairs(const Graph& g) {
  std::size_t count = 0;
  const auto label = connected_components(g, &count);
  std::vector<std::uint64_t> sizes(count, 0);
  for (auto l : label) ++sizes[l];
  ComponentPairs out;
  for (auto s : sizes) out.connected_pairs += s * (s - 1) / 2;
  out.all_connected = count == 1;
  return out;
}

void check_distance_preconditions(const Graph& g) {
  if (g.num_vertices() < 2) throw std::invalid_argument("average_graph_distance: need at least 2 vertices");
  if (g.num_edges() == 0) throw UndefinedStatistic("average_graph_distance: no connected pairs");
}

constexpr std::size_t kDistanceBatch = 512;

// Relabels vertices so that each run of `block` consecutive labels is a few
// compact BFS balls grown over still-unlabeled vertices. A batch of sources
// that sit close together keeps the bit-parallel wavefront narrow.
std::vector<VertexId> ball_relabeling(const Graph& g, std::size_t block) {
  const std::size_t n = g.num_vertices();
  constexpr VertexId kUnset = std::numeric_limits<VertexId>::max();
  std::vector<VertexId> perm(n, kUnset);
  std::vector<VertexId> queue;
  std::vector<char> queued(n, 0);
  VertexId next = 0;
  for (VertexId seed = 0; seed < n; ++seed) {
    if (perm[seed] != kUnset) continue;
    const std::size_t room = block - next % block;
    queue.clear();
    queue.push_back(seed);
    queued[seed] = 1;
    std::size_t taken = 0;
    for (std::size_t head = 0; head < queue.size() && taken < room; ++head) {
      const VertexId u = queue[head];
      perm[u] = next++;
      ++taken;
      for (VertexId v : g.neighbors(u)) {
        if (perm[v] == kUnset && !queued[v]) {
          queued[v] = 1;
          queue.push_back(v);
        }
      }
    }
    for (VertexId v : queue) queued[v] = 0;
  }
  return perm;
}

using DistanceBlock = std::array<std::uint64_t, kDistanceBatch / 64>;

// Bit-parallel BFS from `sources`, up to kDistanceBatch at a time, each vertex
// carrying one bit per source of the batch. Only vertices with a nonempty
// frontier expand, so a batch of nearby sources costs about one wavefront per
// level rather than a full pass over the graph. For every vertex reached at a
// level, on_reach(batch_start, v, newly_reached_bits, level) is called;
// batch_start indexes `sources` at bit 0. Returns the sum of hop distances
// over all (source, reached vertex) pairs.
template <typename OnReach>
std::uint64_t batched_bfs(const Graph& g, std::span<const VertexId> sources, OnReach&& on_reach) {
  constexpr std::size_t kWords = kDistanceBatch / 64;
  const std::size_t n = g.num_vertices();
  std::vector<DistanceBlock> visited(n), frontier(n), next(n);
  std::vector<char> touched_flag(n, 0);
  std::vector<VertexId> active, touched;
  std::uint64_t total = 0;

  for (std::size_t base = 0; base < sources.size(); base += kDistanceBatch) {
    const std::size_t end = std::min(sources.size(), base + kDistanceBatch);
    std::fill(visited.begin(), visited.end(), DistanceBlock{});
    active.clear();
    for (std::size_t i = base; i < end; ++i) {
      const VertexId s = sources[i];
      const std::size_t bit = i - base;
      if (!std::any_of(frontier[s].begin(), frontier[s].end(), [](std::uint64_t w) { return w != 0; })) {
        active.push_back(s);
      }
      frontier[s][bit / 64] |= std::uint64_t{1} << (bit % 64);
      visited[s] = frontier[s];
    }
    for (std::uint64_t level = 1; !active.empty(); ++level) {
      touched.clear();
      for (VertexId u : active) {
        const DistanceBlock& f = frontier[u];
        for (VertexId v : g.neighbors(u)) {
          if (!touched_flag[v]) {
            touched_flag[v] = 1;
            touched.push_back(v);
          }
          DistanceBlock& acc = next[v];
          for (std::size_t w = 0; w < kWords; ++w) acc[w] |= f[w];
        }
      }
      for (VertexId u : active) frontier[u] = DistanceBlock{};
      active.clear();
      std::uint64_t discovered = 0;
      for (VertexId v : touched) {
        touched_flag[v] = 0;
        DistanceBlock& seen = visited[v];
        DistanceBlock& acc = next[v];
        DistanceBlock& out = frontier[v];
        std::uint64_t any = 0;
        for (std::size_t w = 0; w < kWords; ++w) {
          out[w] = acc[w] & ~seen[w];
          seen[w] |= out[w];
          any |= out[w];
          discovered += static_cast<std::uint64_t>(std::popcount(out[w]));
          acc[w] = 0;
        }
        if (any) {
          active.push_back(v);
          on_reach(base, v, out, level);
        }
      }
      total += level * discovered;
    }
  }
  return total;
}

// Sum of hop distances over ordered reachable pairs.
std::uint64_t ordered_distance_sum(const Graph& g) {
  std::vector<VertexId> all(g.num_vertices());
  std::iota(all.begin(), all.end(), VertexId{0});
  return batched_bfs(g, all, [](std::size_t, VertexId, const DistanceBlock&, std::uint64_t) {});
}

}  // namespace

DistanceSummary average_graph_distance(const Graph& g) {
  check_distance_preconditions(g);
  const auto pairs = count_component_pairs(g);
  const Graph local = g.relabeled(ball_relabeling(g, kDistanceBatch));

  DistanceSummary out;
  out.connected_pair_count = pairs.connected_pairs;
  out.distance_sum = ordered_distance_sum(local) / 2;
  out.all_connected = pairs.all_connected;
  out.average = static_cast<double>(out.distance_sum) / static_cast<double>(out.connected_pair_count);
  return out;
}

DistanceSummary average_graph_distance_sampled(const Graph& g, std::uint64_t pair_count, std::uint64_t seed) {
  check_distance_preconditions(g);
  const std::uint64_t n = g.num_vertices();
  const std::uint64_t total_pairs = n * (n - 1) / 2;
  if (pair_count == 0) throw std::invalid_argument("average_graph_distance_sampled: pair_count must be > 0");
  if (pair_count >= total_pairs) return average_graph_distance(g);

  Xoshiro256 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(pair_count * 2);
  // Sources in draw order so the result does not depend on hash iteration order.
  std::unordered_map<VertexId, std::vector<VertexId>> partners;
  std::vector<VertexId> sources;
  while (chosen.size() < pair_count) {
    auto a = static_cast<VertexId>(rng.below(n));
    auto b = static_cast<VertexId>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!chosen.insert(std::uint64_t{a} * n + b).second) continue;
    auto [it, inserted] = partners.try_emplace(a);
    if (inserted) sources.push_back(a);
    it->second.push_back(b);
  }

  // Batched BFS over the distinct sources in locality order; each vertex
  // keeps the list of (source slot, pair) requests that end there.
  const auto perm = ball_relabeling(g, kDistanceBatch);
  const Graph local = g.relabeled(perm);
  std::sort(sources.begin(), sources.end(), [&](VertexId a, VertexId b) { return perm[a] < perm[b]; });
  std::vector<VertexId> local_sources(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) local_sources[i] = perm[sources[i]];

  DistanceSummary out;
  out.sampled = true;
  out.all_connected = count_component_pairs(g).all_connected;
  struct Request {
    VertexId target;
    std::uint32_t bit;
  };
  std::vector<std::uint32_t> offsets(g.num_vertices() + 1);
  std::vector<std::uint32_t> request_bits;
  for (std::size_t base = 0; base < sources.size(); base += kDistanceBatch) {
    const std::size_t end = std::min(sources.size(), base + kDistanceBatch);
    std::vector<Request> requests;
    for (std::size_t i = base; i < end; ++i) {
      for (VertexId t : partners[sources[i]]) requests.push_back({perm[t], static_cast<std::uint32_t>(i - base)});
    }
    std::fill(offsets.begin(), offsets.end(), 0);
    for (const auto& r : requests) ++offsets[r.target + 1];
    for (std::size_t v = 0; v < g.num_vertices(); ++v) offsets[v + 1] += offsets[v];
    request_bits.assign(requests.size(), 0);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& r : requests) request_bits[fill[r.target]++] = r.bit;

    batched_bfs(local, std::span<const VertexId>(local_sources).subspan(base, end - base),
                [&](std::size_t, VertexId v, const DistanceBlock& reached, std::uint64_t level) {
                  for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
                    const std::uint32_t bit = request_bits[k];
                    if ((reached[bit / 64] >> (bit % 64)) & 1U) {
                      ++out.connected_pair_count;
                      out.distance_sum += level;
                    }
                  }
                });
  }
  out.average = out.connected_pair_count == 0
                    ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(out.distance_sum) / static_cast<double>(out.connected_pair_count);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses exactly two unsigned integers separated by whitespace.
bool parse_pair(std::string_view s, std::uint64_t& a, std::uint64_t& b) {
  const char* p = s.data();
  const char* end = s.data() + s.size();
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc{} || r1.ptr == end || (*r1.ptr != ' ' && *r1.ptr != '\t')) return false;
  p = r1.ptr;
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  auto r2 = std::from_chars(p, end, b);
  return r2.ec == std::errc{} && r2.ptr == end;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  using Kind = ParseError::Kind;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    if (!have_header) {
      if (!parse_pair(line, a, b)) throw ParseError(Kind::kHeader, line_no, "expected header \"n m\"");
      if (a > std::numeric_limits<VertexId>::max()) throw ParseError(Kind::kHeader, line_no, "vertex count too large");
      if (a >= 2 && b > a * (a - 1) / 2) throw ParseError(Kind::kHeader, line_no, "edge count exceeds n(n-1)/2");
      n = a;
      m = b;
      have_header = true;
      edges.reserve(m);
      continue;
    }
    if (!parse_pair(line, a, b)) throw ParseError(Kind::kMalformedLine, line_no, "expected \"u v\"");
    if (edges.size() == m) throw ParseError(Kind::kEdgeCount, line_no, "more edge lines than declared");
    if (a >= n || b >= n) throw ParseError(Kind::kVertexRange, line_no, "vertex id must be < n");
    if (a == b) throw ParseError(Kind::kSelfLoop, line_no, "self-loop");
    if (a > b) std::swap(a, b);
    if (!seen.insert(a * n + b).second) throw ParseError(Kind::kDuplicateEdge, line_no, "duplicate edge");
    edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
  }
  if (!have_header) throw ParseError(Kind::kHeader, line_no + 1, "missing header \"n m\"");
  if (edges.size() != m) {
    throw ParseError(Kind::kEdgeCount, line_no, "declared " + std::to_string(m) + " edges, found " +
                                                    std::to_string(edges.size()));
  }
  return Graph::from_simple_edges(n, edges);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace botdetect
