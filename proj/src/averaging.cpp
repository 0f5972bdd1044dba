#include "facopt/averaging.hpp"

#include <string>

#include "facopt/facpow.hpp"

namespace facopt {

double momentum_coeff(std::int64_t k, double r) {
  if (k < 0) {
    throw std::domain_error("momentum_coeff: requires k >= 0");
  }
  if (!(r > -1.0)) {
    throw std::domain_error("momentum_coeff: requires r > -1, got r=" +
                            std::to_string(r));
  }
  return (r + 1.0) / (static_cast<double>(k) + r + 1.0);
}

Eigen::VectorXd weighted_average(const std::vector<Eigen::VectorXd>& points,
                                 double r) {
  if (points.empty()) {
    throw std::invalid_argument("weighted_average: empty sequence");
  }
  if (!(r > -1.0)) {
    throw std::domain_error("weighted_average: requires r > -1");
  }
  const std::int64_t k = static_cast<std::int64_t>(points.size()) - 1;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(points.front().size());
  for (std::int64_t i = 0; i <= k; ++i) {
    if (points[i].size() != acc.size()) {
      throw std::invalid_argument(
          "weighted_average: mixed vector dimensions");
    }
    acc += facpow(static_cast<double>(i + 1), r) * points[i];
  }
  const double norm = (r + 1.0) / facpow(static_cast<double>(k + 1), r + 1.0);
  return norm * acc;
}

Eigen::VectorXd moving_average_step(const Eigen::VectorXd& prev,
                                    const Eigen::VectorXd& x_k, std::int64_t k,
                                    double r) {
  const double c = momentum_coeff(k, r);
  if (k == 0) return x_k;
  return (1.0 - c) * prev + c * x_k;
}

ScheduleDegeneracyError::ScheduleDegeneracyError(std::int64_t idx, double v)
    : std::runtime_error("momentum schedule degenerates at index " +
                         std::to_string(idx) + ": generated c=" +
                         std::to_string(v) + " leaves (0, 1)"),
      index(idx),
      value(v) {}

MomentumToIam::MomentumToIam(MomentumParams params) : p_(std::move(params)) {
  if (!(p_.beta >= 0.0 && p_.beta < 1.0)) {
    throw std::invalid_argument("MomentumToIam: beta must lie in [0, 1)");
  }
  if (!(p_.c1 > 0.0 && p_.c1 < 1.0)) {
    throw std::invalid_argument("MomentumToIam: c1 must lie in (0, 1)");
  }
  if (!p_.alpha) {
    throw std::invalid_argument("MomentumToIam: alpha sequence is required");
  }
}

MomentumToIam::Pair MomentumToIam::next() {
  const double alpha_k = p_.alpha(k_);
  if (!(alpha_k > 0.0)) {
    throw std::invalid_argument("MomentumToIam: alpha must stay positive");
  }
  double c_next;
  if (k_ == 0) {
    c_next = p_.c1;
  } else {
    const double alpha_prev = p_.alpha(k_ - 1);
    c_next = p_.beta * (alpha_k / alpha_prev) * c_prev_ / (1.0 - c_prev_);
    if (!(c_next > 0.0 && c_next < 1.0)) {
      throw ScheduleDegeneracyError(k_ + 1, c_next);
    }
  }
  const double eta = alpha_k / c_next * (1.0 - p_.beta);
  c_prev_ = c_next;
  ++k_;
  return {eta, c_next};
}

}  // namespace facopt
