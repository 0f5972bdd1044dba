#pragma once

// Factorial powers: k^(r) = Gamma(k + r) / Gamma(k), the natural real-argument
// extension of the product k (k+1) ... (k+r-1). All direct evaluation happens
// in the log domain so that large arguments cannot overflow.

#include <cstdint>

namespace facopt {

// Gamma(k + r) / Gamma(k).
//
// Conventions at the boundary: facpow(0, 0) == 1 and facpow(0, r) == 0 for
// r != 0 (the limit of the Gamma ratio as k -> 0+).
//
// Throws std::domain_error when k < 0, or when k > 0 and k + r <= 0 (a Gamma
// pole or a negative argument would be hit).
double facpow(double k, double r);

// log(Gamma(k + r) / Gamma(k)), same domain and conventions as facpow except
// that the zero cases are out of domain (log of 0 or of the 0^0 convention
// is not useful to callers). For k >= 16 with k + r >= 16 this uses a
// cancellation-free asymptotic difference whose relative error stays below
// ~2e-14 even for k ~ 1e9; otherwise it falls back to lgamma differences.
double facpow_log(double k, double r);

// One step of the index recursion: given value == facpow(k, r) for k >= 1,
// returns facpow(k + 1, r) = value * (k + r) / k. O(1), no Gamma calls.
double recurse_k(double value, double k, double r);

// sum_{i=a}^{b} facpow(i, r) for integer 1 <= a <= b, in closed form:
// (facpow(b, r+1) - facpow(a-1, r+1)) / (r + 1).
//
// Throws std::domain_error when a < 1, a > b, a + r <= 0, or r == -1 (the
// closed form has a pole there; the r == -1 sum is harmonic-like and has no
// factorial-power closed form).
double sum_facpow(std::int64_t a, std::int64_t b, double r);

// Streaming evaluator for scale * (k + offset)^(r), k = 0, 1, 2, ...
//
// Sequential access costs one multiply-divide per step (the index recursion);
// every 1024 steps the cached value is resynchronized against a direct
// log-domain evaluation, which keeps the relative drift from the recursion
// below 1e-12 indefinitely. Random access re-evaluates directly.
class FactorialSchedule {
 public:
  // Requires offset >= 0 and offset + r > 0 (the first emitted value must be
  // inside the facpow domain); throws std::domain_error otherwise.
  FactorialSchedule(double r, double scale = 1.0, std::int64_t offset = 1);

  // Value at index k (>= 0). O(1) when k is the cached index or its
  // successor; a direct evaluation otherwise.
  double value(std::int64_t k);

  // Value at the current index, then advance by one. Successive calls yield
  // the stream for k = 0, 1, 2, ...
  double next();

  // Index the next call to next() will emit.
  std::int64_t index() const { return k_; }

  void reset();

  double r() const { return r_; }
  double scale() const { return scale_; }
  std::int64_t offset() const { return offset_; }

 private:
  double raw_at(std::int64_t k) const;  // facpow(k + offset, r), direct
  void advance_one();

  double r_;
  double scale_;
  std::int64_t offset_;
  std::int64_t k_ = 0;      // index of the cached value
  double raw_ = 0.0;        // facpow(k_ + offset_, r_)
  int since_resync_ = 0;
};

}  // namespace facopt
