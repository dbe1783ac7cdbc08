#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "botdetect/error.hpp"
#include "botdetect/numerics.hpp"
#include "oracles.hpp"

namespace nm = botdetect::numerics;

TEST(LambertW, KnownValues) {
  EXPECT_EQ(nm::lambert_w0(0.0), 0.0);
  EXPECT_NEAR(nm::lambert_w0(std::numbers::e), 1.0, 1e-15);
  // Omega constant.
  EXPECT_NEAR(nm::lambert_w0(1.0), 0.56714329040978387, 1e-15);
  EXPECT_EQ(nm::lambert_w0(-1.0 / std::numbers::e), -1.0);
}

TEST(LambertW, MatchesNewtonOracle) {
  for (double x : {-0.3678, -0.35, -0.2, -0.01, 1e-8, 0.3, 2.0, 10.0, 1e3, 1e6, 1e12}) {
    const double expected = static_cast<double>(oracle::lambert_w0(x));
    EXPECT_NEAR(nm::lambert_w0(x), expected, 1e-13 * std::max(1.0, std::abs(expected))) << "x=" << x;
  }
}

TEST(LambertW, IdentityResidualOnLogGrid) {
  const double lo = -1.0 / std::numbers::e + 1e-9;
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    // Log-spaced offsets above the branch point.
    const double t = static_cast<double>(i) / 1999.0;
    const double x = lo + std::expm1(t * std::log1p(1e6 - lo));
    const double w = nm::lambert_w0(x);
    worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(LambertW, BranchPointTolerance) {
  EXPECT_EQ(nm::lambert_w0(-1.0 / std::numbers::e - 1e-13), -1.0);
  EXPECT_THROW(nm::lambert_w0(-0.5), botdetect::DomainError);
  EXPECT_THROW(nm::lambert_w0(std::nan("")), botdetect::DomainError);
}

TEST(LambertW, MonotoneIncreasing) {
  double prev = -1.0;
  for (double x = -0.36; x < 50.0; x += 0.173) {
    const double w = nm::lambert_w0(x);
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(LogGamma, MatchesStdLgamma) {
  for (double x : {1e-6, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 33.5, 171.0, 1e4}) {
    EXPECT_NEAR(nm::log_gamma(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
  }
  EXPECT_NEAR(nm::log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_THROW(nm::log_gamma(0.0), botdetect::DomainError);
  EXPECT_THROW(nm::log_gamma(-2.5), botdetect::DomainError);
}

TEST(IncompleteBeta, Endpoints) {
  for (double a : {0.5, 1.0, 2.5, 13.0}) {
    for (double b : {0.5, 1.0, 4.0}) {
      EXPECT_EQ(nm::regularized_incomplete_beta(a, b, 0.0), 0.0);
      EXPECT_EQ(nm::regularized_incomplete_beta(a, b, 1.0), 1.0);
    }
  }
}

TEST(IncompleteBeta, SymmetryIsExact) {
  for (double a : {0.5, 1.5, 2.0, 3.5, 8.0, 12.5}) {
    for (double b : {0.5, 1.5, 2.0, 3.5, 8.0}) {
      for (int i = 1; i < 64; ++i) {
        const double x = i / 64.0;
        const double lhs = nm::regularized_incomplete_beta(a, b, x);
        const double rhs = nm::regularized_incomplete_beta(b, a, 1.0 - x);
        EXPECT_EQ(lhs + rhs, 1.0) << "a=" << a << " b=" << b << " x=" << x;
      }
    }
  }
  for (double a : {0.5, 1.5, 7.0}) EXPECT_EQ(nm::regularized_incomplete_beta(a, a, 0.5), 0.5);
}

TEST(IncompleteBeta, ClosedForms) {
  // I_x(a, 1) = x^a and I_x(1, b) = 1 - (1-x)^b.
  for (double x : {0.1, 0.37, 0.5, 0.9}) {
    EXPECT_NEAR(nm::regularized_incomplete_beta(3.0, 1.0, x), std::pow(x, 3.0), 1e-14);
    EXPECT_NEAR(nm::regularized_incomplete_beta(1.0, 2.5, x), 1.0 - std::pow(1.0 - x, 2.5), 1e-14);
    // Arcsine law: I_x(1/2, 1/2) = 2/pi asin(sqrt x).
    EXPECT_NEAR(nm::regularized_incomplete_beta(0.5, 0.5, x), 2.0 / std::numbers::pi * std::asin(std::sqrt(x)), 1e-14);
  }
}

TEST(IncompleteBeta, MatchesQuadratureOracle) {
  for (double a : {0.5, 1.5, 2.0, 4.5, 12.5}) {
    for (double b : {0.5, 1.5, 3.0, 12.5}) {
      for (double x : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double expected = static_cast<double>(oracle::incomplete_beta(a, b, x));
        EXPECT_NEAR(nm::regularized_incomplete_beta(a, b, x), expected, 1e-11) << a << ' ' << b << ' ' << x;
      }
    }
  }
}

TEST(IncompleteBeta, RejectsBadArguments) {
  EXPECT_THROW(nm::regularized_incomplete_beta(0.0, 1.0, 0.5), botdetect::DomainError);
  EXPECT_THROW(nm::regularized_incomplete_beta(1.0, -1.0, 0.5), botdetect::DomainError);
  EXPECT_THROW(nm::regularized_incomplete_beta(1.0, 1.0, 1.5), botdetect::DomainError);
  EXPECT_THROW(nm::regularized_incomplete_beta(1.0, 1.0, std::nan("")), botdetect::DomainError);
}

TEST(RealInterval, Basics) {
  const nm::RealInterval iv(1.0, 3.0);
  EXPECT_TRUE(iv.contains(1.0));
  EXPECT_TRUE(iv.contains(3.0));
  EXPECT_FALSE(iv.contains(3.5));
  EXPECT_EQ(iv.width(), 2.0);
  EXPECT_THROW(nm::RealInterval(2.0, 1.0), botdetect::DomainError);
}
