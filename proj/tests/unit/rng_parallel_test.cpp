#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "botdetect/parallel.hpp"
#include "botdetect/rng.hpp"

using namespace botdetect;

TEST(Xoshiro, SameSeedSameStream) {
  Xoshiro256 a(0);
  Xoshiro256 b(0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  Xoshiro256 c(1);
  EXPECT_NE(Xoshiro256(0)(), c());
}

TEST(Xoshiro, MatchesIndependentReference) {
  // Produced by a separate implementation of SplitMix64 seeding followed by
  // the xoshiro256** step, seed 12345.
  Xoshiro256 rng(12345);
  EXPECT_EQ(rng(), 0xbe6a36374160d49bULL);
  EXPECT_EQ(rng(), 0x214aaa0637a688c6ULL);
  EXPECT_EQ(rng(), 0xf69d16de9954d388ULL);
}

TEST(Xoshiro, UniformRangeAndMean) {
  Xoshiro256 rng(99);
  double sum = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is 1/sqrt(12 * kDraws).
  EXPECT_NEAR(sum / kDraws, 0.5, 5.0 / std::sqrt(12.0 * kDraws));
}

TEST(Xoshiro, BelowIsInRangeAndCoversIt) {
  Xoshiro256 rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(DeriveSeed, SensitiveToEveryComponentAndOrder) {
  const std::uint64_t base = derive_seed(42, {1, 2, 3});
  EXPECT_EQ(base, derive_seed(42, {1, 2, 3}));
  EXPECT_NE(base, derive_seed(43, {1, 2, 3}));
  EXPECT_NE(base, derive_seed(42, {1, 2, 4}));
  EXPECT_NE(base, derive_seed(42, {3, 2, 1}));
  EXPECT_NE(base, derive_seed(42, {1, 2}));
  std::set<std::uint64_t> streams;
  for (std::uint64_t purpose = 1; purpose <= 9; ++purpose) {
    for (std::uint64_t i = 0; i < 1000; ++i) streams.insert(derive_seed(7, {purpose, i}));
  }
  EXPECT_EQ(streams.size(), 9000u);
}

TEST(ParallelMap, PreservesIndexOrder) {
  for (std::size_t workers : {1u, 2u, 7u}) {
    const auto out = parallel_map(1000, [](std::size_t i) { return i * i; }, workers);
    ASSERT_EQ(out.size(), 1000u);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  }
  EXPECT_TRUE(parallel_map(0, [](std::size_t i) { return i; }, 4).empty());
}

TEST(ParallelMap, RethrowsTaskFailure) {
  auto fn = [](std::size_t i) -> int {
    if (i == 37) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(parallel_map(100, fn, 4), std::runtime_error);
  EXPECT_THROW(parallel_map(100, fn, 1), std::runtime_error);
}

TEST(WorkerCount, ReadsEnvironment) {
  ::setenv("BOTDETECT_WORKERS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3u);
  ::setenv("BOTDETECT_WORKERS", "zero", 1);
  EXPECT_GE(default_worker_count(), 1u);
  ::setenv("BOTDETECT_WORKERS", "-2", 1);
  EXPECT_GE(default_worker_count(), 1u);
  ::unsetenv("BOTDETECT_WORKERS");
  EXPECT_GE(default_worker_count(), 1u);
}
