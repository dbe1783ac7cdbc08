#include "botdetect/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "botdetect/error.hpp"
#include "botdetect/numerics.hpp"

namespace botdetect::geometry {

// Generated at configure time from core/data/kissing_numbers.txt.
extern const char* const kBundledKissingData;

namespace {

constexpr double kMaxRadius = 0.5;
// Slack for radii that land a rounding error above 1/2 (e.g. p = pi/4 in d=2).
constexpr double kRadiusSlack = 1e-12;

}  // namespace

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("TorusPoint: dimension must be >= 2");
  for (double c : coords_) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("TorusPoint: coordinates must lie in [0, 1)");
  }
}

double torus_distance_squared(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("torus_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double diff = std::abs(x[j] - y[j]);
    diff = std::min(diff, 1.0 - diff);
    acc += diff * diff;
  }
  return acc;
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
  return std::sqrt(torus_distance_squared(x, y));
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  return torus_distance(x.coords(), y.coords());
}

double probability_for_radius(double r, int d) {
  if (d < 2) throw DomainError("probability_for_radius: dimension must be >= 2");
  if (!(r > 0.0 && r <= kMaxRadius)) throw DomainError("probability_for_radius: radius must lie in (0, 1/2]");
  const double log_p = d * std::log(std::sqrt(std::numbers::pi) * r) - numerics::log_gamma(d / 2.0 + 1.0);
  return std::exp(log_p);
}

double radius_for_probability(double p, int d) {
  if (d < 2) throw DomainError("radius_for_probability: dimension must be >= 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("radius_for_probability: probability must lie in (0, 1)");
  const double log_r = (std::log(p) + numerics::log_gamma(d / 2.0 + 1.0)) / d;
  const double r = std::exp(log_r) / std::sqrt(std::numbers::pi);
  if (r > kMaxRadius * (1.0 + kRadiusSlack)) {
    std::ostringstream msg;
    msg << "radius exceeds 1/2: p=" << p << " in dimension " << d << " needs r=" << r;
    throw InfeasibleParams(msg.str());
  }
  return std::min(r, kMaxRadius);
}

KissingTable KissingTable::parse(std::istream& in) {
  KissingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    int d = 0;
    long long value = 0;
    std::string extra;
    if (!(fields >> d >> value) || (fields >> extra) || d < 2 || d > kCutoff || value <= 0) {
      throw ParseError(ParseError::Kind::kMalformedLine, line_no, "expected \"d value\" with 2 <= d <= 24");
    }
    if (!table.values_.emplace(d, static_cast<std::uint64_t>(value)).second) {
      throw ParseError(ParseError::Kind::kMalformedLine, line_no, "dimension listed twice");
    }
  }
  std::uint64_t previous = 0;
  for (int d = 2; d <= kCutoff; ++d) {
    auto it = table.values_.find(d);
    if (it == table.values_.end()) {
      throw ParseError(ParseError::Kind::kMalformedLine, line_no, "missing dimension " + std::to_string(d));
    }
    if (it->second < previous) {
      throw ParseError(ParseError::Kind::kMalformedLine, line_no, "values must be nondecreasing in d");
    }
    previous = it->second;
  }
  return table;
}

const KissingTable& KissingTable::bundled() {
  static const KissingTable table = [] {
    std::istringstream in(kBundledKissingData);
    return parse(in);
  }();
  return table;
}

std::uint64_t KissingTable::lookup(int d) const {
  if (d < 2) throw DomainError("kissing_number: dimension must be >= 2");
  if (d <= kCutoff) return values_.at(d);
  return static_cast<std::uint64_t>(std::ceil(std::pow(kExponentialBase, d)));
}

std::uint64_t kissing_number(int d) { return KissingTable::bundled().lookup(d); }

}  // namespace botdetect::geometry
