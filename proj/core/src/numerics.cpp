#include "botdetect/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "botdetect/error.hpp"

namespace botdetect::numerics {

RealInterval::RealInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi)) throw DomainError("RealInterval requires lo <= hi");
}

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e rounded to nearest
constexpr double kBranchTolerance = 1e-12;
constexpr int kMaxHalleyIterations = 100;

// Winitzki's global approximation for x >= -0.25, the branch-point series
// below that. Both land within a few percent, which Halley polishes off.
double lambert_w0_seed(double x) {
  if (x < -0.25) {
    const double q = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    return -1.0 + q * (1.0 + q * (-1.0 / 3.0 + q * 11.0 / 72.0));
  }
  const double l = std::log1p(x);
  return l * (1.0 - std::log1p(l) / (2.0 + l));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x < -kInvE - kBranchTolerance) {
    throw DomainError("lambert_w0: argument " + std::to_string(x) + " below -1/e");
  }
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = lambert_w0_seed(x);
  for (int it = 0; it < kMaxHalleyIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    double next = w - step;
    if (next < -1.0) next = -1.0;
    const double delta = std::abs(next - w);
    w = next;
    if (delta <= 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double log_gamma(double x) {
  if (std::isnan(x) || x <= 0.0) throw DomainError("log_gamma: argument must be > 0");
  if (std::isinf(x)) return x;
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum away from its pole at 0.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  // Lanczos, g = 7, nine terms.
  static constexpr std::array<double, 9> kCoeffs = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double series = kCoeffs[0];
  for (std::size_t i = 1; i < kCoeffs.size(); ++i) series += kCoeffs[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  return h;
}

// x^a (1-x)^b / (a B(a, b)) times the continued fraction.
double beta_direct(double a, double b, double x) {
  const double log_front = log_gamma(a + b) - (log_gamma(a) + log_gamma(b)) + a * std::log(x) + b * std::log1p(-x);
  return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("regularized_incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (a == b && x == 0.5) return 0.5;

  // The flipped branch reuses the direct form with swapped arguments, so
  // I_x(a, b) and 1 - I_{1-x}(b, a) agree bit for bit when 1 - x is exact.
  // On the switch point itself the smaller of a, b takes the direct form,
  // so the swapped call lands on the other branch.
  const double pivot = (a + 1.0) / (a + b + 2.0);
  double value;
  if (x < pivot || (x == pivot && a < b)) {
    value = beta_direct(a, b, x);
  } else {
    value = 1.0 - beta_direct(b, a, 1.0 - x);
  }
  if (value < 0.0) return 0.0;
  if (value > 1.0) return 1.0;
  return value;
}

}  // namespace botdetect::numerics
