#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "facopt/rng.hpp"

using facopt::Rng;

TEST_CASE("identical seeds give identical streams") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(12345), d(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.uniform01() == d.uniform01());
    CHECK(c.normal() == d.normal());
    CHECK(c.uniform_index(17) == d.uniform_index(17));
  }
}

TEST_CASE("different seeds differ") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("per-seed streams use base xor index") {
  Rng direct(1000 ^ 7);
  Rng stream = Rng::stream(1000, 7);
  for (int i = 0; i < 100; ++i) CHECK(direct.next_u64() == stream.next_u64());
}

TEST_CASE("uniform01 lies in the half-open unit interval") {
  Rng r(99);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);  // the stream actually spreads out
  CHECK(hi > 0.99);
}

TEST_CASE("uniform_index covers the range without obvious bias") {
  Rng r(5);
  const std::int64_t n = 10;
  std::vector<int> counts(n, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const std::int64_t v = r.uniform_index(n);
    REQUIRE(v >= 0);
    REQUIRE(v < n);
    ++counts[v];
  }
  for (std::int64_t k = 0; k < n; ++k) {
    CHECK(counts[k] > draws / static_cast<int>(n) * 8 / 10);
    CHECK(counts[k] < draws / static_cast<int>(n) * 12 / 10);
  }
  CHECK(r.uniform_index(1) == 0);
  CHECK_THROWS_AS(r.uniform_index(0), std::invalid_argument);
}

TEST_CASE("normal draws have plausible first two moments") {
  Rng r(31337);
  const int draws = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.03);
}
