#include "botdetect/star.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace botdetect {

NeighborhoodGraph::NeighborhoodGraph(const Graph& g, VertexId center) {
  const auto nb = g.neighbors(center);
  t_ = nb.size();
  words_ = std::max<std::size_t>(1, (t_ + 63) / 64);
  rows_.assign(t_ * words_, 0);
  for (std::size_t a = 0; a < t_; ++a) {
    const auto other = g.neighbors(nb[a]);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < other.size() && j < t_) {
      if (other[i] < nb[j]) {
        ++i;
      } else if (nb[j] < other[i]) {
        ++j;
      } else {
        rows_[a * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
        ++i;
        ++j;
      }
    }
  }
}

NeighborhoodGraph::NeighborhoodGraph(std::size_t t, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : t_(t), words_(std::max<std::size_t>(1, (t + 63) / 64)), rows_(t * words_, 0) {
  for (const auto& [a, b] : edges) {
    if (a >= t || b >= t || a == b) throw std::invalid_argument("NeighborhoodGraph: invalid edge");
    rows_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
    rows_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
  }
}

std::size_t NeighborhoodGraph::greedy_independent_set() const {
  std::vector<std::uint64_t> alive(words_, 0);
  for (std::size_t a = 0; a < t_; ++a) alive[a / 64] |= std::uint64_t{1} << (a % 64);
  std::size_t remaining = t_;
  std::size_t taken = 0;
  while (remaining > 0) {
    std::size_t pick = t_;
    std::size_t pick_degree = t_ + 1;
    for (std::size_t a = 0; a < t_; ++a) {
      if (!((alive[a / 64] >> (a % 64)) & 1U)) continue;
      std::size_t deg = 0;
      for (std::size_t w = 0; w < words_; ++w) deg += static_cast<std::size_t>(std::popcount(rows_[a * words_ + w] & alive[w]));
      if (deg < pick_degree) {
        pick = a;
        pick_degree = deg;
        if (deg == 0) break;
      }
    }
    ++taken;
    alive[pick / 64] &= ~(std::uint64_t{1} << (pick % 64));
    for (std::size_t w = 0; w < words_; ++w) alive[w] &= ~rows_[pick * words_ + w];
    remaining = 0;
    for (auto word : alive) remaining += static_cast<std::size_t>(std::popcount(word));
  }
  return taken;
}

namespace {

class MisSearch {
 public:
  explicit MisSearch(const std::vector<std::uint64_t>& adj) : adj_(adj) {}

  std::size_t solve(std::uint64_t all) {
    best_ = 0;
    search(all, 0);
    return best_;
  }

 private:
  static std::uint64_t bit(std::size_t x) { return std::uint64_t{1} << x; }

  // Vertices of degree 0 or 1 within `p` belong to some maximum independent set.
  std::uint64_t reduce(std::uint64_t p, std::size_t& size) const {
    bool changed = true;
    while (changed && p) {
      changed = false;
      for (std::uint64_t scan = p; scan; scan &= scan - 1) {
        const auto x = static_cast<std::size_t>(std::countr_zero(scan));
        if (!(p & bit(x))) continue;
        const int deg = std::popcount(adj_[x] & p);
        if (deg <= 1) {
          ++size;
          p &= ~(bit(x) | adj_[x]);
          changed = true;
        }
      }
    }
    return p;
  }

  // Greedy clique cover of p; any independent set meets each clique at most once.
  std::size_t clique_cover_bound(std::uint64_t p) const {
    std::size_t cliques = 0;
    while (p) {
      const auto x = static_cast<std::size_t>(std::countr_zero(p));
      std::uint64_t clique = bit(x);
      std::uint64_t candidates = p & adj_[x];
      while (candidates) {
        const auto y = static_cast<std::size_t>(std::countr_zero(candidates));
        clique |= bit(y);
        candidates &= adj_[y];
      }
      p &= ~clique;
      ++cliques;
    }
    return cliques;
  }

  void search(std::uint64_t p, std::size_t size) {
    p = reduce(p, size);
    if (!p) {
      best_ = std::max(best_, size);
      return;
    }
    if (size + static_cast<std::size_t>(std::popcount(p)) <= best_) return;
    if (size + clique_cover_bound(p) <= best_) return;

    std::size_t pivot = 0;
    int pivot_degree = -1;
    for (std::uint64_t scan = p; scan; scan &= scan - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(scan));
      const int deg = std::popcount(adj_[x] & p);
      if (deg > pivot_degree) {
        pivot = x;
        pivot_degree = deg;
      }
    }
    search(p & ~bit(pivot) & ~adj_[pivot], size + 1);
    search(p & ~bit(pivot), size);
  }

  const std::vector<std::uint64_t>& adj_;
  std::size_t best_ = 0;
};

}  // namespace

std::size_t NeighborhoodGraph::maximum_independent_set() const {
  if (t_ > 64) throw std::invalid_argument("maximum_independent_set: at most 64 vertices supported");
  if (t_ == 0) return 0;
  const std::uint64_t all = t_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t_) - 1;
  return MisSearch(rows_).solve(all);
}

namespace {

void check_cap(std::size_t exact_cap) {
  if (exact_cap > kMaxExactCap) throw std::invalid_argument("exact cap must be <= 64");
}

// Star size at v; fell_back reports use of the greedy bound above the cap.
std::size_t star_size(const Graph& g, VertexId v, StarMethod method, std::size_t exact_cap, bool& fell_back) {
  fell_back = false;
  const std::size_t deg = g.degree(v);
  if (deg <= 1) return deg;
  const NeighborhoodGraph local(g, v);
  if (method == StarMethod::kGreedy) return local.greedy_independent_set();
  if (deg > exact_cap) {
    fell_back = true;
    return local.greedy_independent_set();
  }
  return local.maximum_independent_set();
}

}  // namespace

std::size_t isolated_star_size(const Graph& g, VertexId v, StarMethod method, std::size_t exact_cap) {
  check_cap(exact_cap);
  if (v >= g.num_vertices()) throw std::out_of_range("isolated_star_size: vertex out of range");
  if (method == StarMethod::kExact && g.degree(v) > exact_cap) {
    throw ExactCapExceeded("degree " + std::to_string(g.degree(v)) + " exceeds exact cap " +
                           std::to_string(exact_cap));
  }
  bool fell_back = false;
  return star_size(g, v, method, exact_cap, fell_back);
}

IsolatedStarProfile isolated_star_profile(const Graph& g, StarMethod method, std::size_t exact_cap) {
  check_cap(exact_cap);
  IsolatedStarProfile out;
  out.method = method;
  out.per_vertex_star_size.resize(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    bool fell_back = false;
    const std::size_t s = star_size(g, v, method, exact_cap, fell_back);
    out.per_vertex_star_size[v] = s;
    out.max_star = std::max(out.max_star, s);
    out.greedy_fallbacks += fell_back ? 1 : 0;
  }
  return out;
}

MaxStar max_isolated_star(const Graph& g, StarMethod method, std::size_t exact_cap) {
  check_cap(exact_cap);
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });

  MaxStar out;
  for (VertexId v : order) {
    if (g.degree(v) <= out.value) break;
    bool fell_back = false;
    const std::size_t s = star_size(g, v, method, exact_cap, fell_back);
    out.greedy_fallbacks += fell_back ? 1 : 0;
    if (s > out.value) {
      out.value = s;
      out.argmax = v;
    }
  }
  return out;
}

}  // namespace botdetect
