#include "botdetect/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

#include "botdetect/error.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

NormalizedParams ModelParams::normalize() const {
  if (n < 2) throw std::invalid_argument("model: n must be >= 2");
  if (n > std::numeric_limits<VertexId>::max()) throw std::invalid_argument("model: n too large");
  if (d < 2) throw std::invalid_argument("model: d must be >= 2");
  if (k > n) throw std::invalid_argument("model: botnet size k must be <= n");
  if (!std::isfinite(density.value) || density.value <= 0.0) {
    throw std::invalid_argument("model: density must be a positive finite number");
  }

  NormalizedParams out;
  out.n = n;
  out.d = d;
  out.k = k;
  switch (density.kind) {
    case Density::Kind::kRadius:
      if (density.value > 0.5) throw InfeasibleParams("model: radius " + std::to_string(density.value) + " exceeds 1/2");
      out.r = density.value;
      out.p = geometry::probability_for_radius(out.r, d);
      break;
    case Density::Kind::kEdgeProbability:
    case Density::Kind::kAverageDegree: {
      const double p = density.kind == Density::Kind::kEdgeProbability ? density.value
                                                                       : density.value / static_cast<double>(n);
      if (p >= 1.0) throw InfeasibleParams("model: edge probability must be < 1");
      out.p = p;
      out.r = geometry::radius_for_probability(p, d);
      break;
    }
  }
  return out;
}

namespace {

// Structure-of-arrays copy of the active points, optionally in cell order.
struct PointColumns {
  int d = 0;
  std::vector<VertexId> ids;
  std::vector<std::vector<double>> axis;  // axis[j][pos]
};

class PairScanner {
 public:
  PairScanner(const PointColumns& cols, double r2, std::vector<Edge>& out) : cols_(cols), r2_(r2), out_(out) {}

  // Tests point `a` against the contiguous positions [b0, b1).
  void scan(std::size_t a, std::size_t b0, std::size_t b1) {
    if (b1 <= b0) return;
    const std::size_t len = b1 - b0;
    if (buffer_.size() < len) buffer_.resize(len);
    double* acc = buffer_.data();
    std::fill(acc, acc + len, 0.0);
    for (int j = 0; j < cols_.d; ++j) {
      const double xa = cols_.axis[static_cast<std::size_t>(j)][a];
      const double* xb = cols_.axis[static_cast<std::size_t>(j)].data() + b0;
      for (std::size_t t = 0; t < len; ++t) {
        double diff = std::abs(xa - xb[t]);
        diff = std::min(diff, 1.0 - diff);
        acc[t] += diff * diff;
      }
    }
    for (std::size_t t = 0; t < len; ++t) {
      if (acc[t] <= r2_) out_.emplace_back(cols_.ids[a], cols_.ids[b0 + t]);
    }
  }

 private:
  const PointColumns& cols_;
  double r2_;
  std::vector<Edge>& out_;
  std::vector<double> buffer_;
};

}  // namespace

namespace {

// Cell-offset vectors whose cells can hold a pair within distance r: the
// smallest gap between cells c and c + delta along one axis is
// (circular |delta| - 1) / m, and the squared gaps must sum to at most r^2.
std::vector<std::vector<int>> reachable_offsets(std::size_t m, int gridded, double r) {
  const double side = 1.0 / static_cast<double>(m);
  const auto reach = static_cast<long>(std::floor(r * static_cast<double>(m))) + 1;
  std::vector<int> deltas;
  if (2 * reach + 1 >= static_cast<long>(m)) {
    for (std::size_t c = 0; c < m; ++c) deltas.push_back(static_cast<int>(c));
  } else {
    for (long c = -reach; c <= reach; ++c) deltas.push_back(static_cast<int>(c));
  }
  auto gap2 = [&](int delta) {
    const auto a = static_cast<std::size_t>(std::abs(delta)) % m;
    const std::size_t circ = std::min(a, m - a);
    // Slack absorbs rounding at cell boundaries.
    const double g = std::max(0.0, (static_cast<double>(circ) - 1.0) * side - 1e-9);
    return g * g;
  };
  const double r2 = r * r;
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  auto grow = [&](auto&& self, double used) -> void {
    if (static_cast<int>(current.size()) == gridded) {
      out.push_back(current);
      return;
    }
    for (int delta : deltas) {
      const double next = used + gap2(delta);
      if (next > r2) continue;
      current.push_back(delta);
      self(self, next);
      current.pop_back();
    }
  };
  grow(grow, 0.0);
  return out;
}

struct GridPlan {
  std::size_t m = 1;
  int gridded = 0;
  std::vector<std::vector<int>> offsets;
};

// Picks cells per axis and gridded axes by a rough cost model: distance
// evaluations plus per-point overhead for every visited neighbor cell.
GridPlan plan_grid(std::size_t na, int d, double r) {
  GridPlan best;
  const double n = static_cast<double>(na);
  double best_cost = n * n / 2.0 * d;
  const auto m_min = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(1.0 / r)));
  for (int g = 1; g <= d; ++g) {
    for (std::size_t m = m_min; m <= 4 * m_min + 8; ++m) {
      double cells = 1.0;
      for (int j = 0; j < g; ++j) cells *= static_cast<double>(m);
      if (cells > 4.0 * n + 64.0) break;
      auto offsets = reachable_offsets(m, g, r);
      const double visits = static_cast<double>(offsets.size());
      const double cost = n * n / cells * visits / 2.0 * d + n * visits * (8.0 + d) + cells * visits;
      if (cost < best_cost) {
        best_cost = cost;
        best = {m, g, std::move(offsets)};
      }
    }
  }
  return best;
}

}  // namespace

std::vector<Edge> geometric_edges(const LocationMatrix& locations, double r, std::span<const char> excluded) {
  const std::size_t n = locations.size();
  const int d = locations.dimension();
  if (!excluded.empty() && excluded.size() != n) throw std::invalid_argument("geometric_edges: mask size mismatch");
  if (!(r > 0.0 && r <= 0.5)) throw DomainError("geometric_edges: radius must lie in (0, 1/2]");

  std::vector<VertexId> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (excluded.empty() || !excluded[i]) active.push_back(static_cast<VertexId>(i));
  }
  const std::size_t na = active.size();

  const double r2 = r * r;
  std::vector<Edge> edges;
  PointColumns cols;
  cols.d = d;
  cols.axis.assign(static_cast<std::size_t>(d), std::vector<double>(na));

  const GridPlan plan = plan_grid(na, d, r);
  if (plan.gridded == 0) {
    cols.ids = active;
    for (std::size_t pos = 0; pos < na; ++pos) {
      const auto row = locations.row(active[pos]);
      for (int j = 0; j < d; ++j) cols.axis[static_cast<std::size_t>(j)][pos] = row[static_cast<std::size_t>(j)];
    }
    PairScanner scanner(cols, r2, edges);
    for (std::size_t a = 0; a + 1 < na; ++a) scanner.scan(a, a + 1, na);
    return edges;
  }

  const std::size_t m = plan.m;
  const int gridded = plan.gridded;
  std::size_t cells = 1;
  for (int j = 0; j < gridded; ++j) cells *= m;

  auto cell_coord = [m](double x) {
    auto c = static_cast<std::size_t>(x * static_cast<double>(m));
    return std::min(c, m - 1);
  };
  std::vector<std::size_t> cell_of(na);
  std::vector<std::size_t> start(cells + 1, 0);
  for (std::size_t pos = 0; pos < na; ++pos) {
    const auto row = locations.row(active[pos]);
    std::size_t c = 0;
    for (int j = gridded - 1; j >= 0; --j) c = c * m + cell_coord(row[static_cast<std::size_t>(j)]);
    cell_of[pos] = c;
    ++start[c + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) start[c + 1] += start[c];
  cols.ids.resize(na);
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (std::size_t pos = 0; pos < na; ++pos) {
      const std::size_t slot = cursor[cell_of[pos]]++;
      cols.ids[slot] = active[pos];
      const auto row = locations.row(active[pos]);
      for (int j = 0; j < d; ++j) cols.axis[static_cast<std::size_t>(j)][slot] = row[static_cast<std::size_t>(j)];
    }
  }

  // Offsets are distinct modulo m on every axis, so each unordered cell pair
  // is reached twice and kept once.
  PairScanner scanner(cols, r2, edges);
  std::vector<std::size_t> coord(static_cast<std::size_t>(gridded));
  const auto mm = static_cast<long>(m);
  for (std::size_t c = 0; c < cells; ++c) {
    if (start[c] == start[c + 1]) continue;
    std::size_t rest = c;
    for (int j = 0; j < gridded; ++j) {
      coord[static_cast<std::size_t>(j)] = rest % m;
      rest /= m;
    }
    for (const auto& o : plan.offsets) {
      std::size_t other = 0;
      for (int j = gridded - 1; j >= 0; --j) {
        const auto js = static_cast<std::size_t>(j);
        const long shifted = ((static_cast<long>(coord[js]) + o[js]) % mm + mm) % mm;
        other = other * m + static_cast<std::size_t>(shifted);
      }
      if (other < c || start[other] == start[other + 1]) continue;
      for (std::size_t a = start[c]; a < start[c + 1]; ++a) {
        if (other == c) {
          scanner.scan(a, a + 1, start[c + 1]);
        } else {
          scanner.scan(a, start[other], start[other + 1]);
        }
      }
    }
  }
  return edges;
}

namespace {

SampleOutput sample_impl(const NormalizedParams& params, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  SampleOutput out;
  out.params = params;
  const std::size_t n = params.n;

  out.locations = LocationMatrix(n, params.d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : out.locations.row(i)) x = rng.uniform();
  }

  std::vector<char> is_bot(n, 0);
  if (params.k > 0) {
    std::vector<VertexId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<VertexId>(i);
    for (std::size_t i = 0; i < params.k; ++i) {
      const std::size_t j = i + rng.below(n - i);
      std::swap(ids[i], ids[j]);
    }
    out.botnet.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(params.k));
    std::sort(out.botnet.begin(), out.botnet.end());
    for (VertexId b : out.botnet) is_bot[b] = 1;
  }

  std::vector<Edge> edges = geometric_edges(out.locations, params.r, is_bot);
  for (VertexId b : out.botnet) {
    for (VertexId j = 0; j < n; ++j) {
      if (j == b || (is_bot[j] && j < b)) continue;
      if (rng.uniform() < params.p) edges.emplace_back(b, j);
    }
  }
  out.graph = Graph::from_simple_edges(n, edges);
  return out;
}

}  // namespace

SampleOutput sample_null(const ModelParams& params, std::uint64_t seed) {
  if (params.k != 0) throw std::invalid_argument("sample_null: k must be 0");
  return sample_impl(params.normalize(), seed);
}

SampleOutput sample_alternative(const ModelParams& params, std::uint64_t seed) {
  if (params.k < 1) throw std::invalid_argument("sample_alternative: k must be >= 1");
  return sample_impl(params.normalize(), seed);
}

SampleOutput sample_model(const ModelParams& params, std::uint64_t seed) {
  return params.k == 0 ? sample_null(params, seed) : sample_alternative(params, seed);
}

void write_locations(const LocationMatrix& locations, std::ostream& out) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const auto row = locations.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << row[j];
    }
    out << '\n';
  }
  out.precision(old);
}

void write_botnet(std::span<const VertexId> botnet, std::ostream& out) {
  for (VertexId b : botnet) out << b << '\n';
}

}  // namespace botdetect
