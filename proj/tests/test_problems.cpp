#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "facopt/problems.hpp"
#include "facopt/rng.hpp"

using namespace facopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_vec(Rng& rng, int dim, double scale = 1.0) {
  VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = scale * rng.normal();
  return v;
}

MatrixXd random_mat(Rng& rng, int rows, int cols) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// Central finite differences of p.value at x.
VectorXd fd_gradient(const Problem& p, const VectorXd& x, double h) {
  VectorXd g(x.size());
  VectorXd e = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    e(i) = xi + h;
    const double up = p.value(e);
    e(i) = xi - h;
    const double dn = p.value(e);
    e(i) = xi;
    g(i) = (up - dn) / (2.0 * h);
  }
  return g;
}

void check_component_average_matches_full(const Problem& p, Rng& rng,
                                          double scale) {
  REQUIRE(p.component_grad);
  REQUIRE(p.constants.n_components.has_value());
  const auto n = *p.constants.n_components;
  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd x = random_vec(rng, p.dim, scale);
    VectorXd avg = VectorXd::Zero(p.dim);
    for (std::int64_t i = 0; i < n; ++i) avg += p.component_grad(x, i);
    avg /= static_cast<double>(n);
    const VectorXd full = p.full_grad(x);
    CHECK((avg - full).norm() <= 1e-10 * std::max(1.0, full.norm()));
  }
}

}  // namespace

TEST_CASE("ball projection") {
  Rng rng(11);
  const int dim = 6;
  const VectorXd center = random_vec(rng, dim);
  SUBCASE("interior points pass through") {
    const VectorXd x = center + 0.5 * random_vec(rng, dim).normalized();
    CHECK((project_ball(x, center, 1.0) - x).norm() == 0.0);
  }
  SUBCASE("distance 2R maps to the boundary") {
    const VectorXd dir = random_vec(rng, dim).normalized();
    const VectorXd x = center + 2.0 * dir;
    const VectorXd px = project_ball(x, center, 1.0);
    CHECK((px - (center + dir)).norm() < 1e-12);
  }
  SUBCASE("idempotent and nonexpansive") {
    for (int i = 0; i < 1000; ++i) {
      const VectorXd x = random_vec(rng, dim, 3.0);
      const VectorXd y = random_vec(rng, dim, 3.0);
      const VectorXd px = project_ball(x, center, 1.0);
      const VectorXd py = project_ball(y, center, 1.0);
      CHECK((project_ball(px, center, 1.0) - px).norm() <= 1e-14);
      CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
    }
  }
  CHECK_THROWS_AS(project_ball(center, center, 0.0), std::invalid_argument);
}

TEST_CASE("libsvm parsing basics") {
  std::istringstream in(
      "1 3:0.5 10:-1.25\n"
      "\n"
      "2    # all-zero row with a comment\n"
      "# a full-line comment\n"
      "1 1:2.0 2:3.5\n");
  const Dataset d = parse_libsvm(in);
  REQUIRE(d.rows.size() == 3);
  CHECK(d.n_features == 10);
  CHECK(d.n_classes == 2);
  // Labels 1 and 2 map to dense ids 0 and 1 in ascending order.
  CHECK(d.rows[0].label == 0);
  CHECK(d.rows[1].label == 1);
  CHECK(d.rows[2].label == 0);
  REQUIRE(d.rows[0].features.size() == 2);
  CHECK(d.rows[0].features[0].first == 2);  // stored 0-based
  CHECK(d.rows[0].features[0].second == 0.5);
  CHECK(d.rows[0].features[1].first == 9);
  CHECK(d.rows[0].features[1].second == -1.25);
  CHECK(d.rows[1].features.empty());
}

TEST_CASE("libsvm parse errors carry line numbers") {
  SUBCASE("non-increasing index") {
    std::istringstream in("1 1:1.0\n1 5:0.1 3:0.2\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("malformed label") {
    std::istringstream in("abc 1:1.0\n");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
  }
  SUBCASE("bad feature value") {
    std::istringstream in("1 1:1.0\n2 2:x\n");
    try {
      parse_libsvm(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("missing colon") {
    std::istringstream in("1 17\n");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
  }
  SUBCASE("zero index") {
    std::istringstream in("1 0:1.0\n");
    CHECK_THROWS_AS(parse_libsvm(in), ParseError);
  }
}

TEST_CASE("blob fixture is deterministic and well formed") {
  const Dataset a = make_blobs_dataset(60, 4, 8, 1.2, 0.6, 0.25, 42);
  const Dataset b = make_blobs_dataset(60, 4, 8, 1.2, 0.6, 0.25, 42);
  REQUIRE(a.rows.size() == 60);
  CHECK(a.n_features == 8);
  CHECK(a.n_classes == 4);
  REQUIRE(b.rows.size() == a.rows.size());
  int flipped = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].label == b.rows[i].label);
    REQUIRE(a.rows[i].features.size() == 8);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(a.rows[i].features[j].second == b.rows[i].features[j].second);
      norm2 += a.rows[i].features[j].second * a.rows[i].features[j].second;
    }
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-12);
    CHECK(a.rows[i].label >= 0);
    CHECK(a.rows[i].label < 4);
    flipped += a.rows[i].label != static_cast<int>(i % 4);
  }
  CHECK(flipped == 15);  // floor(0.25 * 60)

  const Dataset c = make_blobs_dataset(60, 4, 8, 1.2, 0.6, 0.25, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.rows.size() && !any_diff; ++i) {
    any_diff = a.rows[i].features[0].second != c.rows[i].features[0].second;
  }
  CHECK(any_diff);
}

TEST_CASE("libsvm write/parse round trip is exact") {
  const Dataset a = make_blobs_dataset(25, 3, 6, 1.2, 0.5, 0.2, 9);
  std::stringstream buf;
  write_libsvm(a, buf);
  const Dataset b = parse_libsvm(buf);
  REQUIRE(b.rows.size() == a.rows.size());
  CHECK(b.n_features == a.n_features);
  CHECK(b.n_classes == a.n_classes);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(b.rows[i].label == a.rows[i].label);
    REQUIRE(b.rows[i].features.size() == a.rows[i].features.size());
    for (std::size_t j = 0; j < a.rows[i].features.size(); ++j) {
      CHECK(b.rows[i].features[j].first == a.rows[i].features[j].first);
      CHECK(b.rows[i].features[j].second == a.rows[i].features[j].second);
    }
  }
}

TEST_CASE("distance problem") {
  Rng rng(5);
  const int dim = 12;
  VectorXd xstar = random_vec(rng, dim);
  xstar = 0.5 * xstar / xstar.norm();
  const Problem p = make_distance_problem(xstar, 2.5, 1.0);

  CHECK(p.value(xstar) == 0.0);
  CHECK(*p.value_at_opt == 0.0);
  CHECK((*p.minimizer - xstar).norm() == 0.0);
  CHECK(*p.constants.G == 2.5);
  CHECK(*p.constants.R == 1.0);

  for (int i = 0; i < 200; ++i) {
    const VectorXd x = random_vec(rng, dim, 2.0);
    const VectorXd g = p.full_grad(x);
    if ((x - xstar).norm() > 0.0) {
      CHECK(std::fabs(g.norm() - 2.5) < 1e-10);
    }
    CHECK(p.projection(x).norm() <= 1.0 + 1e-12);
    Rng stream(77);
    CHECK((p.stochastic_grad(x, stream) - g).norm() == 0.0);
  }

  VectorXd outside = 2.0 * xstar / xstar.norm();
  CHECK_THROWS_AS(make_distance_problem(outside, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("quadratic identity example") {
  const Problem p = make_quadratic(MatrixXd::Identity(3, 3),
                                   VectorXd::Zero(3));
  CHECK(*p.constants.L == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*p.constants.mu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.minimizer->norm() < 1e-12);
  VectorXd x(3);
  x << 1.0, 2.0, 2.0;
  CHECK(p.value(x) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("one-dimensional scaled quadratic") {
  const double L = 9.0;
  MatrixXd a(1, 1);
  a << std::sqrt(L);
  const Problem p = make_quadratic(a, VectorXd::Zero(1));
  VectorXd x(1);
  x << 2.0;
  CHECK(p.value(x) == doctest::Approx(0.5 * L * 4.0).epsilon(1e-12));
  CHECK(*p.constants.L == doctest::Approx(L).epsilon(1e-12));
}

TEST_CASE("quadratic rejects rank deficiency") {
  MatrixXd a(3, 2);
  a << 1.0, 1.0, 2.0, 2.0, -1.0, -1.0;  // duplicate columns
  CHECK_THROWS_AS(make_quadratic(a, VectorXd::Zero(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(MatrixXd::Ones(2, 3), VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("quadratic gradient matches finite differences") {
  Rng rng(31);
  const MatrixXd a = random_mat(rng, 50, 20);
  const VectorXd b = random_vec(rng, 50);
  const Problem p = make_quadratic(a, b);
  for (int t = 0; t < 5; ++t) {
    const VectorXd x = random_vec(rng, 20);
    const VectorXd g = p.full_grad(x);
    const VectorXd fd = fd_gradient(p, x, 1e-5);
    CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
  }
  // Minimizer satisfies the normal equations and achieves the lowest value
  // among probes.
  const VectorXd g0 = p.full_grad(*p.minimizer);
  CHECK(g0.norm() < 1e-8);
  for (int t = 0; t < 20; ++t) {
    const VectorXd x = *p.minimizer + random_vec(rng, 20, 0.1);
    CHECK(p.value(x) >= *p.value_at_opt - 1e-12);
  }
}

TEST_CASE("component gradients average to the full gradient") {
  Rng rng(13);
  SUBCASE("quadratic") {
    const Problem p = make_quadratic(random_mat(rng, 30, 8),
                                     random_vec(rng, 30));
    check_component_average_matches_full(p, rng, 1.0);
  }
  SUBCASE("ridge") {
    const Problem p = make_ridge(random_mat(rng, 30, 8), random_vec(rng, 30),
                                 0.5);
    check_component_average_matches_full(p, rng, 1.0);
  }
  SUBCASE("multiclass svm") {
    const Dataset d = make_blobs_dataset(40, 3, 10, 1.2, 0.6, 0.1, 3);
    const Problem p = make_multiclass_svm(d, 1e-3);
    check_component_average_matches_full(p, rng, 0.3);
  }
}

TEST_CASE("stochastic gradients are unbiased on smooth problems") {
  Rng rng(101);
  const Problem p = make_quadratic(random_mat(rng, 40, 10),
                                   random_vec(rng, 40));
  const VectorXd x = random_vec(rng, 10);
  const VectorXd full = p.full_grad(x);
  const int samples = 100000;
  VectorXd sum = VectorXd::Zero(10), sumsq = VectorXd::Zero(10);
  Rng stream(2222);
  for (int s = 0; s < samples; ++s) {
    const VectorXd g = p.stochastic_grad(x, stream);
    sum += g;
    sumsq += g.cwiseProduct(g);
  }
  for (int i = 0; i < 10; ++i) {
    const double mean = sum(i) / samples;
    const double var = sumsq(i) / samples - mean * mean;
    const double se = std::sqrt(std::max(var, 0.0) / samples);
    CHECK_MESSAGE(std::fabs(mean - full(i)) <= 3.0 * se + 1e-9, "coord ", i);
  }
}

TEST_CASE("declared smoothness bounds gradient differences") {
  Rng rng(17);
  SUBCASE("quadratic") {
    const Problem p = make_quadratic(random_mat(rng, 25, 7),
                                     random_vec(rng, 25));
    for (int t = 0; t < 1000; ++t) {
      const VectorXd x = random_vec(rng, 7, 2.0);
      const VectorXd y = random_vec(rng, 7, 2.0);
      const double num = (p.full_grad(x) - p.full_grad(y)).norm();
      CHECK(num <= (*p.constants.L + 1e-9) * (x - y).norm() + 1e-12);
    }
  }
  SUBCASE("ridge declares component smoothness, valid for the sum too") {
    const Problem p = make_ridge(random_mat(rng, 25, 7), random_vec(rng, 25),
                                 0.3);
    const auto n = *p.constants.n_components;
    for (int t = 0; t < 1000; ++t) {
      const VectorXd x = random_vec(rng, 7, 2.0);
      const VectorXd y = random_vec(rng, 7, 2.0);
      const double dist = (x - y).norm();
      CHECK((p.full_grad(x) - p.full_grad(y)).norm() <=
            (*p.constants.L + 1e-9) * dist + 1e-12);
      const auto i = t % n;
      CHECK((p.component_grad(x, i) - p.component_grad(y, i)).norm() <=
            (*p.constants.L + 1e-9) * dist + 1e-12);
    }
  }
}

TEST_CASE("multiclass svm objective") {
  const Dataset d = make_blobs_dataset(40, 4, 12, 1.2, 0.6, 0.15, 21);
  const Problem p = make_multiclass_svm(d, 1e-3);
  REQUIRE(p.dim == 4 * 12);

  SUBCASE("all-zero weights cost exactly 1") {
    CHECK(p.value(VectorXd::Zero(p.dim)) == 1.0);
  }
  SUBCASE("declared constants") {
    CHECK(*p.constants.mu == 1e-3);
    CHECK(*p.constants.R == doctest::Approx(std::sqrt(2000.0)).epsilon(1e-12));
    double max_row = 0.0;
    for (const auto& row : d.rows) {
      double n2 = 0.0;
      for (auto& [idx, val] : row.features) n2 += val * val;
      max_row = std::max(max_row, std::sqrt(n2));
    }
    CHECK(*p.constants.G ==
          doctest::Approx(2.0 * max_row + 1e-3 * std::sqrt(2000.0))
              .epsilon(1e-12));
  }
  SUBCASE("weight_decay 0 leaves mu and R absent") {
    const Problem q = make_multiclass_svm(d, 0.0);
    CHECK(!q.constants.mu.has_value());
    CHECK(!q.constants.R.has_value());
    const VectorXd w = VectorXd::Ones(q.dim) * 5.0;
    CHECK((q.projection(w) - w).norm() == 0.0);  // unconstrained
  }
  SUBCASE("subgradient norm stays within declared G on the ball") {
    Rng rng(55);
    for (int t = 0; t < 300; ++t) {
      VectorXd w = random_vec(rng, p.dim);
      w = p.projection(w * (rng.uniform01() * 60.0));
      const VectorXd g = p.stochastic_grad(w, rng);
      CHECK(g.norm() <= *p.constants.G + 1e-9);
    }
  }
  SUBCASE("empty dataset rejected") {
    CHECK_THROWS_AS(make_multiclass_svm(Dataset{}, 1e-3),
                    std::invalid_argument);
  }
}

TEST_CASE("svm subgradient matches finite differences at smooth points") {
  const Dataset d = make_blobs_dataset(30, 3, 8, 1.2, 0.6, 0.1, 7);
  const Problem p = make_multiclass_svm(d, 1e-3);

  // Hinge rows are differentiable when the max margin is attained uniquely
  // and away from the clamp; resample until every row has clearance.
  MatrixXd x = MatrixXd::Zero(30, 8);
  for (int i = 0; i < 30; ++i)
    for (const auto& [idx, val] : d.rows[i].features) x(i, idx) = val;

  auto is_smooth_at = [&](const VectorXd& w) {
    for (int i = 0; i < 30; ++i) {
      const int yi = d.rows[i].label;
      const double sy = w.segment(yi * 8, 8).dot(x.row(i));
      double best = -1e300, second = -1e300;
      for (int c = 0; c < 3; ++c) {
        if (c == yi) continue;
        const double m = 1.0 + w.segment(c * 8, 8).dot(x.row(i)) - sy;
        if (m > best) {
          second = best;
          best = m;
        } else {
          second = std::max(second, m);
        }
      }
      if (std::fabs(best) < 1e-4) return false;         // clamp boundary
      if (best - second < 1e-4) return false;           // tied violators
    }
    return true;
  };

  Rng rng(23);
  int tested = 0;
  while (tested < 20) {
    const VectorXd w = random_vec(rng, p.dim, 0.4);
    if (!is_smooth_at(w)) continue;
    ++tested;
    const VectorXd g = p.full_grad(w);
    const VectorXd fd = fd_gradient(p, w, 1e-6);
    CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
  }
}
