#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <vector>

namespace botdetect::geometry {

/// A location on the unit torus [0,1)^d, d >= 2.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> coords);

  std::size_t dimension() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t j) const noexcept { return coords_[j]; }

 private:
  std::vector<double> coords_;
};

/// Sum over coordinates of the squared wrap-around differences. The edge rule
/// of the geometric graph compares this quantity against r^2.
/// Coordinates are accumulated in index order.
double torus_distance_squared(std::span<const double> x, std::span<const double> y);

/// Euclidean distance on the torus with per-coordinate wrap-around.
/// Throws std::invalid_argument on dimension mismatch.
double torus_distance(std::span<const double> x, std::span<const double> y);
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// Volume of the d-ball of radius r, i.e. the edge probability of a pair of
/// uniform torus points when r <= 1/2.
double probability_for_radius(double r, int d);

/// Inverse of probability_for_radius. Throws InfeasibleParams when the
/// resulting radius would exceed 1/2, DomainError for p outside (0, 1).
double radius_for_probability(double p, int d);

/// Table of kissing numbers (exact or best known upper bound) for 2 <= d <= cutoff.
class KissingTable {
 public:
  static constexpr int kCutoff = 24;
  static constexpr double kExponentialBase = 1.3233;

  /// Parses "d value" lines; '#' starts a comment line. Requires every
  /// dimension 2..kCutoff to be present and the values to be nondecreasing.
  static KissingTable parse(std::istream& in);

  /// The table bundled with the library (core/data/kissing_numbers.txt).
  static const KissingTable& bundled();

  /// Tabulated value for d <= kCutoff, ceil(1.3233^d) beyond.
  std::uint64_t lookup(int d) const;

  const std::map<int, std::uint64_t>& entries() const noexcept { return values_; }

 private:
  std::map<int, std::uint64_t> values_;
};

/// kissing_number(d) = KissingTable::bundled().lookup(d).
std::uint64_t kissing_number(int d);

}  // namespace botdetect::geometry
