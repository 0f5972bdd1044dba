#pragma once

// Weighted iterate averaging built on factorial-power weights, and the
// parameter transform between classical heavy-ball momentum and its
// iterate-averaging form.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace facopt {

// (r + 1) / (k + r + 1): the moving-average coefficient that makes the online
// recursion reproduce the factorial-power weighted average. Equals 1 at k = 0
// for every admissible r and 1/(k+1) at r = 0 (plain averaging).
// Requires k >= 0 and r > -1.
double momentum_coeff(std::int64_t k, double r);

// ((r+1) / (k+1)^(r+1)) * sum_{i=0..k} (i+1)^(r) x_i over the whole sequence
// x_0..x_k. Requires a nonempty sequence of equal-dimension vectors and
// r > -1.
Eigen::VectorXd weighted_average(const std::vector<Eigen::VectorXd>& points,
                                 double r);

// One step of the equivalent online form:
// (1 - c_k) prev + c_k x_k with c_k = momentum_coeff(k, r).
// The coefficient index matches the index of the newly incorporated point, so
// at k = 0 the result is x_0 and prev is ignored.
Eigen::VectorXd moving_average_step(const Eigen::VectorXd& prev,
                                    const Eigen::VectorXd& x_k, std::int64_t k,
                                    double r);

// Classical momentum parameters: m_{k+1} = beta m_k + (1-beta) g_k,
// x_{k+1} = x_k - alpha_k m_{k+1}, with m_0 = 0.
struct MomentumParams {
  double beta = 0.0;                          // in [0, 1)
  std::function<double(std::int64_t)> alpha;  // k -> alpha_k > 0
  double c1 = 0.5;                            // seed coefficient, in (0, 1)
};

// Raised when the generated coefficient sequence leaves (0, 1); the momentum
// run it encodes has no iterate-averaging equivalent past this index.
struct ScheduleDegeneracyError : std::runtime_error {
  ScheduleDegeneracyError(std::int64_t index, double value);
  std::int64_t index;  // index of the offending c
  double value;
};

// Lazily emits the iterate-averaging parameters equivalent to a classical
// momentum run:
//   eta_k = (alpha_k / c_{k+1}) (1 - beta),
//   c_{k+1} = beta (alpha_k / alpha_{k-1}) c_k / (1 - c_k), seeded with c_1.
// The emitted pair at index k is (eta_k, c_{k+1}). Degenerate coefficient
// streams surface as ScheduleDegeneracyError instead of being clamped.
class MomentumToIam {
 public:
  explicit MomentumToIam(MomentumParams params);

  struct Pair {
    double eta;     // eta_k
    double c_next;  // c_{k+1}
  };

  Pair next();
  std::int64_t index() const { return k_; }

 private:
  MomentumParams p_;
  std::int64_t k_ = 0;
  double c_prev_ = 0.0;  // c_k of the last emission, once k_ > 0
};

}  // namespace facopt
