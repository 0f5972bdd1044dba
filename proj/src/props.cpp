#include "facopt/props.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "facopt/averaging.hpp"
#include "facopt/facpow.hpp"

namespace facopt {

namespace {

const std::vector<double> kRGrid = {-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 3.7};

double rel_err(double got, double want) {
  if (want == 0.0) {
    return std::fabs(got);
  }
  return std::fabs(got - want) / std::fabs(want);
}

PropRow row_from_worst(const std::string& name, double worst, double tol) {
  return {name, worst <= tol, worst};
}

PropRow index_recursion() {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    for (double r : kRGrid) {
      if (!(k + r > 0.0)) continue;
      const double lhs = facpow(k + 1.0, r);
      const double rhs = (k + r) / k * facpow(k, r);
      worst = std::max(worst, rel_err(lhs, rhs));
    }
  }
  return row_from_worst("index-recursion", worst, 1e-10);
}

PropRow power_recursion() {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    for (double r : kRGrid) {
      if (!(k + r > 0.0)) continue;
      const double lhs = facpow(k + 1.0, r);
      const double rhs = (k + r) * facpow(k + 1.0, r - 1.0);
      worst = std::max(worst, rel_err(lhs, rhs));
    }
  }
  return row_from_worst("power-recursion", worst, 1e-10);
}

PropRow difference(double bias) {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    for (double r : kRGrid) {
      if (!(k + r > 0.0)) continue;
      const double lhs = facpow(k + 1.0, r) - facpow(k, r) + bias;
      const double rhs = r * facpow(k + 1.0, r - 1.0);
      // The subtraction loses a little to cancellation; scale by the larger
      // operand.
      const double scale =
          std::max({std::fabs(lhs), std::fabs(rhs), facpow(k + 1.0, r)});
      worst = std::max(worst, std::fabs(lhs - rhs) / scale);
    }
  }
  return row_from_worst("difference", worst, 1e-10);
}

PropRow ratio() {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    for (double r : kRGrid) {
      for (double q : kRGrid) {
        if (!(k + r > 0.0) || !(k + r + q > 0.0)) continue;
        const double lhs = facpow(k, r + q) / facpow(k, r);
        const double rhs = facpow(k + r, q);
        worst = std::max(worst, rel_err(lhs, rhs));
      }
    }
  }
  return row_from_worst("ratio", worst, 1e-10);
}

PropRow inversion() {
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    for (double r : kRGrid) {
      if (!(k > r) || !(k - r > 0.0)) continue;
      worst = std::max(worst,
                       rel_err(facpow(k, -r), 1.0 / facpow(k - r, r)));
    }
  }
  return row_from_worst("inversion", worst, 1e-10);
}

PropRow summation() {
  double worst = 0.0;
  for (std::int64_t a : {1, 2, 5}) {
    for (double r : kRGrid) {
      if (!(a + r > 0.0)) continue;
      double acc = 0.0;
      for (std::int64_t b = a; b <= 200; ++b) {
        acc += facpow(static_cast<double>(b), r);
        worst = std::max(worst, rel_err(sum_facpow(a, b, r), acc));
      }
    }
  }
  return row_from_worst("summation", worst, 1e-9);
}

PropRow inverse_difference() {
  double worst = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double lhs = 1.0 / facpow(k + 1.0, -0.5) - 1.0 / facpow(k, -0.5);
    const double rhs = 0.5 / facpow(k, 0.5);
    worst = std::max(worst, rel_err(lhs, rhs));
  }
  return row_from_worst("inverse-difference", worst, 1e-10);
}

// Sandwich rows report how close the value comes to either bound (a ratio
// that must stay at or below 1).
PropRow sandwich_half_power() {
  double worst = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double v = facpow(k, 0.5);
    worst = std::max({worst, std::sqrt(k - 0.5) / v,
                      v / std::sqrt(static_cast<double>(k))});
  }
  return row_from_worst("sandwich-half-power", worst, 1.0);
}

PropRow sandwich_inverse_half() {
  double worst = 0.0;
  for (int k = 2; k <= 10000; ++k) {
    const double v = facpow(k, -0.5);
    worst = std::max(
        {worst, 1.0 / (std::sqrt(k - 0.5) * v), v * std::sqrt(k - 1.0)});
  }
  return row_from_worst("sandwich-inverse-half", worst, 1.0);
}

PropRow telescoping() {
  double worst = 0.0;
  for (int j : {0, 1, 3}) {
    for (double r : {0.0, 0.5, 1.0, 3.0}) {
      for (int k = 1; k <= 100; ++k) {
        const double ck = (r + 1.0) / (k + j + r);
        const double ckm1 = (r + 1.0) / (k - 1 + j + r);
        const double lhs = (1.0 - ck) / ck * facpow(k + j, r);
        const double rhs = 1.0 / ckm1 * facpow(k + j - 1.0, r);
        worst = std::max(worst, rel_err(lhs, rhs));
      }
    }
  }
  return row_from_worst("telescoping", worst, 1e-10);
}

PropRow weight_normalization() {
  double worst = 0.0;
  for (double r : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    for (int k : {0, 1, 2, 10, 100, 500}) {
      double sum = 0.0;
      const double norm =
          (r + 1.0) / facpow(static_cast<double>(k + 1), r + 1.0);
      for (int i = 0; i <= k; ++i) {
        sum += norm * facpow(static_cast<double>(i + 1), r);
      }
      worst = std::max(worst, std::fabs(sum - 1.0));
    }
  }
  return row_from_worst("weight-normalization", worst, 1e-12);
}

PropRow prefix_equivalence() {
  double worst = 0.0;
  for (double r : {-0.5, 0.0, 0.5, 2.0}) {
    std::vector<Eigen::VectorXd> values;
    Eigen::VectorXd online = Eigen::VectorXd::Zero(1);
    for (int k = 0; k <= 60; ++k) {
      Eigen::VectorXd point(1);
      point(0) = std::sin(0.7 * k) + 0.1 * k;
      values.push_back(point);
      online = moving_average_step(online, point, k, r);
      worst =
          std::max(worst, rel_err(online(0), weighted_average(values, r)(0)));
    }
  }
  return row_from_worst("prefix-equivalence", worst, 1e-10);
}

PropRow schedule_drift() {
  double worst = 0.0;
  for (double r : {-0.5, 0.5, 2.0}) {
    FactorialSchedule sched(r);
    for (int k = 0; k < 100000; ++k) {
      const double direct = facpow(static_cast<double>(k + 1), r);
      worst = std::max(worst, rel_err(sched.next(), direct));
    }
  }
  return row_from_worst("schedule-drift", worst, 1e-12);
}

}  // namespace

bool PropsReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const PropRow& row) { return row.pass; });
}

PropsReport run_props(double bias) {
  PropsReport report;
  report.rows.push_back(index_recursion());
  report.rows.push_back(power_recursion());
  report.rows.push_back(difference(bias));
  report.rows.push_back(ratio());
  report.rows.push_back(inversion());
  report.rows.push_back(summation());
  report.rows.push_back(inverse_difference());
  report.rows.push_back(sandwich_half_power());
  report.rows.push_back(sandwich_inverse_half());
  report.rows.push_back(telescoping());
  report.rows.push_back(weight_normalization());
  report.rows.push_back(prefix_equivalence());
  report.rows.push_back(schedule_drift());
  return report;
}

std::string format_props_report(const PropsReport& report) {
  std::size_t width = 0;
  for (const PropRow& row : report.rows) {
    width = std::max(width, row.name.size());
  }
  std::string out;
  for (const PropRow& row : report.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-*s  %s  worst error %.3e\n",
                  static_cast<int>(width), row.name.c_str(),
                  row.pass ? "PASS" : "FAIL", row.worst_err);
    out += line;
  }
  out += report.all_pass() ? "all identities PASS\n" : "some identities FAIL\n";
  return out;
}

}  // namespace facopt
