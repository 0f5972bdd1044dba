#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "facopt/bounds.hpp"
#include "facopt/facpow.hpp"

using namespace facopt;

namespace {

BoundConstants all_constants() {
  BoundConstants c;
  c.G = 1.5;
  c.L = 4.0;
  c.mu = 0.25;
  c.R = 2.0;
  c.D0 = 0.8;
  c.gap0 = 3.0;
  c.m0 = 40;
  return c;
}

}  // namespace

TEST_CASE("bound names round trip") {
  for (BoundKind kind :
       {BoundKind::nonsmooth_anytime, BoundKind::strongly_convex,
        BoundKind::accelerated, BoundKind::svrg_convex,
        BoundKind::svrg_strongly_convex, BoundKind::dual_averaging,
        BoundKind::sqrt_baseline, BoundKind::recursive_baseline}) {
    CHECK(bound_kind_from_string(to_string(kind)) == kind);
  }
  CHECK(to_string(BoundKind::nonsmooth_anytime) == "nonsmooth-anytime");
  CHECK(to_string(BoundKind::recursive_baseline) == "recursive-baseline");
  CHECK_THROWS_AS(bound_kind_from_string("warp-speed"), std::invalid_argument);
  try {
    bound_kind_from_string("nope");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("nope") != std::string::npos);
    CHECK(what.find("svrg-convex") != std::string::npos);
  }
}

TEST_CASE("missing constants are reported by name") {
  BoundConstants only_g;
  only_g.G = 1.0;
  try {
    make_bound(BoundKind::svrg_convex, only_g);
    FAIL("expected a missing-constant error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("svrg-convex") != std::string::npos);
    CHECK(what.find("gap0") != std::string::npos);
    CHECK(what.find("L") != std::string::npos);
    CHECK(what.find("D0") != std::string::npos);
    CHECK(what.find("m0") != std::string::npos);
  }
  try {
    make_bound(BoundKind::strongly_convex, only_g);
    FAIL("expected a missing-constant error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("mu") != std::string::npos);
  }
  CHECK_THROWS_AS(make_bound(BoundKind::sqrt_baseline, only_g),
                  std::invalid_argument);
  CHECK_NOTHROW(make_bound(BoundKind::nonsmooth_anytime,
                           [] {
                             BoundConstants c;
                             c.G = 1.0;
                             c.R = 1.0;
                             return c;
                           }()));
}

TEST_CASE("closed forms at small n") {
  const BoundConstants c = all_constants();
  const double G = *c.G, L = *c.L, mu = *c.mu, R = *c.R, D0 = *c.D0,
               gap0 = *c.gap0;

  const BoundSpec accelerated = make_bound(BoundKind::accelerated, c);
  CHECK(bound_value(accelerated, 0) ==
        std::numeric_limits<double>::infinity());
  CHECK(bound_value(accelerated, 1) ==
        doctest::Approx(L * D0 * D0).epsilon(1e-14));
  CHECK(bound_value(accelerated, 2) ==
        doctest::Approx(2.0 * L * D0 * D0 / 6.0).epsilon(1e-13));

  const BoundSpec strong = make_bound(BoundKind::strongly_convex, c);
  CHECK(bound_value(strong, 0) ==
        doctest::Approx(2.0 * G * G / mu).epsilon(1e-14));
  CHECK(bound_value(strong, 9) ==
        doctest::Approx(2.0 * G * G / (10.0 * mu)).epsilon(1e-14));

  const BoundSpec nonsmooth = make_bound(BoundKind::nonsmooth_anytime, c);
  CHECK(bound_value(nonsmooth, 0) ==
        doctest::Approx(std::sqrt(2.0) * R * G * facpow(2.0, -0.5))
            .epsilon(1e-13));

  const BoundSpec dual = make_bound(BoundKind::dual_averaging, c);
  CHECK(bound_value(dual, 7) ==
        doctest::Approx(2.0 * R * G * facpow(9.0, -0.5)).epsilon(1e-13));

  const BoundSpec sqrt_base = make_bound(BoundKind::sqrt_baseline, c);
  CHECK(bound_value(sqrt_base, 1) ==
        doctest::Approx(R * G).epsilon(1e-14));  // sqrt(2)/sqrt(2) = 1

  const BoundSpec recursive = make_bound(BoundKind::recursive_baseline, c);
  CHECK(bound_value(recursive, 0) ==
        doctest::Approx(R * G * (std::sqrt(2.0) / (1.0 + std::sqrt(3.0)) + 2.0))
            .epsilon(1e-14));

  const BoundSpec svrg_c = make_bound(BoundKind::svrg_convex, c);
  CHECK(bound_value(svrg_c, 0) ==
        doctest::Approx(gap0 + 9.0 * L * D0 * D0 / 40.0).epsilon(1e-14));
  CHECK(bound_value(svrg_c, 3) ==
        doctest::Approx((gap0 + 9.0 * L * D0 * D0 / 40.0) / 8.0)
            .epsilon(1e-14));

  const BoundSpec svrg_s = make_bound(BoundKind::svrg_strongly_convex, c);
  CHECK(bound_value(svrg_s, 0) ==
        doctest::Approx(gap0 + 0.75 * mu * D0 * D0).epsilon(1e-14));
  CHECK(bound_value(svrg_s, 2) ==
        doctest::Approx(0.36 * (gap0 + 0.75 * mu * D0 * D0)).epsilon(1e-14));

  CHECK_THROWS_AS(bound_value(strong, -1), std::invalid_argument);
}

TEST_CASE("factorial anytime bound is strictly below the sqrt baseline") {
  const BoundConstants c = all_constants();
  const BoundSpec factorial = make_bound(BoundKind::nonsmooth_anytime, c);
  const BoundSpec sqrt_base = make_bound(BoundKind::sqrt_baseline, c);
  for (std::int64_t n = 0; n <= 10000; ++n) {
    CHECK(bound_value(factorial, n) < bound_value(sqrt_base, n));
  }
}

TEST_CASE("bounds are positive and nonincreasing") {
  const BoundConstants c = all_constants();
  for (BoundKind kind :
       {BoundKind::nonsmooth_anytime, BoundKind::strongly_convex,
        BoundKind::dual_averaging, BoundKind::sqrt_baseline,
        BoundKind::recursive_baseline}) {
    const BoundSpec spec = make_bound(kind, c);
    double prev = bound_value(spec, 0);
    CHECK(prev > 0.0);
    for (std::int64_t n = 1; n <= 2000; ++n) {
      const double cur = bound_value(spec, n);
      CHECK(cur > 0.0);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
  const BoundSpec accelerated = make_bound(BoundKind::accelerated, c);
  double prev = bound_value(accelerated, 1);
  for (std::int64_t n = 2; n <= 2000; ++n) {
    const double cur = bound_value(accelerated, n);
    CHECK(cur > 0.0);
    CHECK(cur < prev);
    prev = cur;
  }
  for (BoundKind kind :
       {BoundKind::svrg_convex, BoundKind::svrg_strongly_convex}) {
    const BoundSpec spec = make_bound(kind, c);
    double prev_epoch = bound_value(spec, 0);
    for (std::int64_t s = 1; s <= 40; ++s) {
      const double cur = bound_value(spec, s);
      CHECK(cur > 0.0);
      CHECK(cur < prev_epoch);
      prev_epoch = cur;
    }
  }
}
