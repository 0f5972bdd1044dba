#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "facopt/averaging.hpp"
#include "facopt/facpow.hpp"
#include "facopt/rng.hpp"

using facopt::momentum_coeff;
using facopt::MomentumParams;
using facopt::MomentumToIam;
using facopt::moving_average_step;
using facopt::ScheduleDegeneracyError;
using facopt::weighted_average;
using Eigen::VectorXd;

namespace {

VectorXd scalar_vec(double v) {
  VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("momentum coefficient closed form") {
  for (double r : {-0.5, 0.0, 0.5, 1.0, 3.0, 7.25}) {
    CHECK(momentum_coeff(0, r) == 1.0);
  }
  CHECK(momentum_coeff(3, 1.0) == doctest::Approx(0.4).epsilon(1e-15));
  for (int k = 0; k <= 20; ++k) {
    CHECK(momentum_coeff(k, 0.0) ==
          doctest::Approx(1.0 / (k + 1)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(momentum_coeff(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(momentum_coeff(2, -1.0), std::domain_error);
}

TEST_CASE("weighted average worked examples") {
  // Constant sequences stay fixed: the weights are a probability vector.
  std::vector<VectorXd> constant(7, scalar_vec(3.5));
  for (double r : {-0.5, 0.0, 1.0, 3.0}) {
    CHECK(weighted_average(constant, r)(0) ==
          doctest::Approx(3.5).epsilon(1e-12));
  }
  std::vector<VectorXd> ramp = {scalar_vec(0), scalar_vec(1), scalar_vec(2)};
  CHECK(weighted_average(ramp, 0.0)(0) == doctest::Approx(1.0).epsilon(1e-12));
  // r = 1: weights 1,2,3 over normalizer 3^(2)/2 = 6, so (0+2+6)/6.
  CHECK(weighted_average(ramp, 1.0)(0) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(weighted_average({}, 1.0), std::invalid_argument);
}

TEST_CASE("moving average steps") {
  VectorXd prev = scalar_vec(123.0);
  CHECK(moving_average_step(prev, scalar_vec(7.0), 0, 2.0)(0) == 7.0);

  // Iterating 0, 1, 2 with r = 1 lands on the weighted average 4/3.
  VectorXd avg = scalar_vec(0.0);
  avg = moving_average_step(avg, scalar_vec(0.0), 0, 1.0);
  avg = moving_average_step(avg, scalar_vec(1.0), 1, 1.0);
  CHECK(avg(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  avg = moving_average_step(avg, scalar_vec(2.0), 2, 1.0);
  CHECK(avg(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  // r = 0 reproduces the running arithmetic mean.
  facopt::Rng rng(7);
  VectorXd mean = scalar_vec(0.0);
  double acc = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double v = rng.uniform01();
    acc += v;
    mean = moving_average_step(mean, scalar_vec(v), k, 0.0);
    CHECK(mean(0) == doctest::Approx(acc / (k + 1)).epsilon(1e-12));
  }
}

TEST_CASE("online form equals the weighted sum at every prefix") {
  facopt::Rng rng(42);
  const int dim = 10, count = 100;
  std::vector<VectorXd> points;
  for (int i = 0; i < count; ++i) {
    VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v(d) = rng.normal();
    points.push_back(v);
  }
  for (double r : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    VectorXd online;
    std::vector<VectorXd> prefix;
    for (int k = 0; k < count; ++k) {
      prefix.push_back(points[k]);
      online = moving_average_step(k == 0 ? points[0] : online, points[k], k, r);
      const VectorXd direct = weighted_average(prefix, r);
      const double rel =
          (online - direct).norm() / std::max(1e-300, direct.norm());
      CHECK_MESSAGE(rel <= 1e-10, "r=", r, " k=", k);
    }
  }
}

TEST_CASE("factorial-power weights are a probability vector") {
  for (double r : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    for (int k : {0, 1, 2, 10, 100, 500}) {
      double sum = 0.0;
      const double norm =
          (r + 1.0) / facopt::facpow(static_cast<double>(k + 1), r + 1.0);
      for (int i = 0; i <= k; ++i) {
        sum += norm * facopt::facpow(static_cast<double>(i + 1), r);
      }
      CHECK_MESSAGE(std::fabs(sum - 1.0) <= 1e-12, "r=", r, " k=", k);
    }
  }
}

TEST_CASE("momentum transform worked example") {
  const double alpha = 0.37;
  MomentumToIam gen({0.5, [=](std::int64_t) { return alpha; }, 1.0 / 3.0});
  auto p0 = gen.next();
  CHECK(p0.c_next == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p0.eta == doctest::Approx(1.5 * alpha).epsilon(1e-14));
  auto p1 = gen.next();
  CHECK(p1.c_next == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p1.eta == doctest::Approx(2.0 * alpha).epsilon(1e-14));
}

TEST_CASE("momentum-free streams degenerate after the first emission") {
  MomentumToIam gen({0.0, [](std::int64_t) { return 0.125; }, 0.5});
  auto p0 = gen.next();
  CHECK(p0.eta == doctest::Approx(0.125 / 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(gen.next(), ScheduleDegeneracyError);
}

TEST_CASE("degeneracy error carries the offending index") {
  MomentumToIam gen({0.0, [](std::int64_t) { return 1.0; }, 0.5});
  gen.next();
  try {
    gen.next();
    FAIL("expected degeneracy");
  } catch (const ScheduleDegeneracyError& e) {
    CHECK(e.index == 2);
    CHECK(e.value == 0.0);
  }
}

TEST_CASE("transform identity alpha_{k-1} + beta alpha_k / c_{k+1} = alpha_{k-1} / c_k") {
  auto alpha = [](std::int64_t k) { return 1.0 / std::sqrt(k + 1.0); };
  MomentumToIam gen({0.5, alpha, 0.5});
  double c_k = 0.0;
  for (int k = 0; k < 50; ++k) {
    auto p = gen.next();
    if (k >= 1) {
      const double lhs = alpha(k - 1) + 0.5 * alpha(k) / p.c_next;
      const double rhs = alpha(k - 1) / c_k;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    c_k = p.c_next;
    CHECK(p.eta > 0.0);
    CHECK(p.c_next > 0.0);
  }
}

TEST_CASE("constant alpha has fixed point c = 1 - beta") {
  const double beta = 0.9;
  MomentumToIam gen({beta, [](std::int64_t) { return 0.01; }, 1.0 - beta});
  for (int k = 0; k < 1000; ++k) {
    auto p = gen.next();
    CHECK(p.c_next == doctest::Approx(1.0 - beta).epsilon(1e-9));
  }
}

TEST_CASE("classical momentum and the transformed averaging run coincide") {
  // Deterministic quadratic in 20 dimensions; no projection on either side.
  const int dim = 20;
  facopt::Rng rng(2024);
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
  Eigen::MatrixXd a = m.transpose() * m / dim +
                      0.1 * Eigen::MatrixXd::Identity(dim, dim);
  VectorXd b(dim);
  for (int i = 0; i < dim; ++i) b(i) = rng.normal();
  auto grad = [&](const VectorXd& x) -> VectorXd { return a * x - b; };

  const double beta = 0.9, alpha = 0.01;
  VectorXd x0(dim);
  for (int i = 0; i < dim; ++i) x0(i) = rng.normal();

  VectorXd x_cl = x0, mom = VectorXd::Zero(dim);
  VectorXd x_av = x0, z = x0;
  MomentumToIam gen({beta, [=](std::int64_t) { return alpha; }, 1.0 - beta});
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    mom = beta * mom + (1.0 - beta) * grad(x_cl);
    x_cl -= alpha * mom;

    auto p = gen.next();
    z -= p.eta * grad(x_av);
    x_av = (1.0 - p.c_next) * x_av + p.c_next * z;

    worst = std::max(worst, (x_cl - x_av).lpNorm<Eigen::Infinity>());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("transform construction errors") {
  auto unit = [](std::int64_t) { return 1.0; };
  CHECK_THROWS_AS(MomentumToIam({1.0, unit, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumToIam({-0.1, unit, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumToIam({0.5, unit, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumToIam({0.5, unit, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumToIam({0.5, nullptr, 0.5}), std::invalid_argument);
}
