#include "facopt/facpow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace facopt {

namespace {

// Tail of Stirling's series for log Gamma(z): the part beyond
// (z - 1/2) log z - z + log(2 pi)/2. Seven terms; for z >= 16 the truncation
// error is far below double precision.
double stirling_tail(double z) {
  const double z2 = 1.0 / (z * z);
  double t = 1.0 / (12.0 * z);
  double s = t;
  t *= z2;
  s -= t / 30.0;  // 1/(360 z^3)
  t *= z2;
  s += t / 105.0;  // 1/(1260 z^5)
  t *= z2;
  s -= t / 140.0;  // 1/(1680 z^7)
  t *= z2;
  s += t / 99.0;  // 1/(1188 z^9)
  t *= z2;
  s -= t * 691.0 / 30030.0;  // 691/(360360 z^11)
  t *= z2;
  s += t / 13.0;  // 1/(156 z^13)
  return s;
}

[[noreturn]] void domain_fail(const char* fn, double k, double r) {
  throw std::domain_error(std::string(fn) + ": arguments outside domain (k=" +
                          std::to_string(k) + ", r=" + std::to_string(r) +
                          "); need k > 0 and k + r > 0, or k == 0");
}

void check_domain(const char* fn, double k, double r) {
  if (!(k >= 0.0)) domain_fail(fn, k, r);        // also rejects NaN
  if (k > 0.0 && !(k + r > 0.0)) domain_fail(fn, k, r);
  if (std::isnan(r)) domain_fail(fn, k, r);
}

}  // namespace

double facpow_log(double k, double r) {
  check_domain("facpow_log", k, r);
  if (k == 0.0) {
    throw std::domain_error(
        "facpow_log: k == 0 boundary has no log-domain value");
  }
  if (r == 0.0) return 0.0;
  if (k >= 16.0 && k + r >= 16.0) {
    // log Gamma(k+r) - log Gamma(k), expanded so the two Stirling leading
    // terms are combined analytically instead of cancelling numerically:
    //   (k - 1/2) log1p(r/k) + r (log(k+r) - 1) + S(k+r) - S(k).
    return (k - 0.5) * std::log1p(r / k) + r * (std::log(k + r) - 1.0) +
           stirling_tail(k + r) - stirling_tail(k);
  }
  return std::lgamma(k + r) - std::lgamma(k);
}

double facpow(double k, double r) {
  check_domain("facpow", k, r);
  if (k == 0.0) return r == 0.0 ? 1.0 : 0.0;
  if (r == 0.0) return 1.0;
  return std::exp(facpow_log(k, r));
}

double recurse_k(double value, double k, double r) {
  if (!(k >= 1.0)) {
    throw std::domain_error("recurse_k: requires k >= 1, got k=" +
                            std::to_string(k));
  }
  return value * (k + r) / k;
}

double sum_facpow(std::int64_t a, std::int64_t b, double r) {
  if (a < 1) {
    throw std::domain_error("sum_facpow: requires a >= 1, got a=" +
                            std::to_string(a));
  }
  if (b < a) {
    throw std::domain_error("sum_facpow: requires a <= b, got a=" +
                            std::to_string(a) + ", b=" + std::to_string(b));
  }
  if (r == -1.0) {
    throw std::domain_error(
        "sum_facpow: r == -1 has no factorial-power closed form");
  }
  if (!(static_cast<double>(a) + r > 0.0)) {
    throw std::domain_error("sum_facpow: requires a + r > 0, got a=" +
                            std::to_string(a) + ", r=" + std::to_string(r));
  }
  const double hi = facpow(static_cast<double>(b), r + 1.0);
  const double lo = facpow(static_cast<double>(a - 1), r + 1.0);
  return (hi - lo) / (r + 1.0);
}

FactorialSchedule::FactorialSchedule(double r, double scale,
                                     std::int64_t offset)
    : r_(r), scale_(scale), offset_(offset) {
  if (offset < 0) {
    throw std::domain_error("FactorialSchedule: offset must be >= 0");
  }
  if (!(static_cast<double>(offset) + r > 0.0)) {
    throw std::domain_error(
        "FactorialSchedule: needs offset + r > 0 so the stream starts inside "
        "the facpow domain");
  }
  raw_ = raw_at(0);
}

double FactorialSchedule::raw_at(std::int64_t k) const {
  return facpow(static_cast<double>(k + offset_), r_);
}

void FactorialSchedule::advance_one() {
  const double base = static_cast<double>(k_ + offset_);
  ++k_;
  if (base < 1.0 || raw_ == 0.0) {
    // Below the recursion's domain (offset 0 start); evaluate directly.
    raw_ = raw_at(k_);
    since_resync_ = 0;
    return;
  }
  raw_ = recurse_k(raw_, base, r_);
  if (++since_resync_ >= 1024) {
    raw_ = raw_at(k_);
    since_resync_ = 0;
  }
}

double FactorialSchedule::value(std::int64_t k) {
  if (k < 0) throw std::domain_error("FactorialSchedule: index must be >= 0");
  if (k == k_) return scale_ * raw_;
  if (k == k_ + 1) {
    advance_one();
    return scale_ * raw_;
  }
  k_ = k;
  raw_ = raw_at(k_);
  since_resync_ = 0;
  return scale_ * raw_;
}

double FactorialSchedule::next() {
  const double v = scale_ * raw_;
  advance_one();
  return v;
}

void FactorialSchedule::reset() {
  k_ = 0;
  raw_ = raw_at(0);
  since_resync_ = 0;
}

}  // namespace facopt
