#pragma once

namespace botdetect::numerics {

/// Closed interval [lo, hi] used to bracket roots.
struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;

  RealInterval() = default;
  RealInterval(double lo_, double hi_);

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// Principal branch of the Lambert-W function: the w >= -1 solving w e^w = x.
/// Inputs down to -1/e - 1e-12 are accepted and clamped onto the branch point.
/// Throws DomainError below that.
double lambert_w0(double x);

/// P(Beta(a, b) <= x). Throws DomainError unless a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

/// ln Gamma(x) for x > 0. Throws DomainError for x <= 0 or NaN.
double log_gamma(double x);

}  // namespace botdetect::numerics
