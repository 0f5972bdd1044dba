#pragma once

// The five optimization methods, their factorial-power parameter presets, and
// epoch-level diagnostics. Steps mutate only the state they are handed and
// draw randomness from an explicit per-run stream.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "facopt/problems.hpp"
#include "facopt/rng.hpp"

namespace facopt {

using Schedule = std::function<double(std::int64_t)>;

// ---------------------------------------------------------------------------
// Momentum SGD in iterate-averaging form:
//   z' = proj(z - eta g(x)),  x' = (1 - c) x + c z'.

struct SgdmState {
  std::int64_t k = 0;
  Eigen::VectorXd x, z;
};

SgdmState make_sgdm_state(const Eigen::VectorXd& x0);

// One step with the given step size and averaging coefficient (the
// coefficient applied while forming x_{k+1}). Requires eta > 0, c in (0, 1].
void sgdm_step(SgdmState& state, const Problem& problem, double eta, double c,
               Rng& rng);

// eta(k) and c(k) give the parameters applied at step k (k = 0, 1, ...).
// A preset instance owns lazy schedule state; build one per run and do not
// share across threads.
struct SgdmSchedules {
  Schedule eta;
  Schedule c;
};

// Anytime nonsmooth preset: eta_k = sqrt(1/2) (R/G) (k+1)^(-1/2), plain
// averaging c = 1/(k+1).
SgdmSchedules preset_sgdm_nonsmooth(double G, double R);

// Strongly convex preset: eta_k = 1/(mu (k+1)), r = 3 momentum c = 4/(k+4).
SgdmSchedules preset_sgdm_strongly_convex(double mu);

// Classical-rate baseline: eta_k = R/(G sqrt(2(k+1))), plain averaging.
SgdmSchedules preset_sgdm_sqrt_baseline(double G, double R);

// Strongly convex step size with the momentum family swept over r:
// eta_k = 1/(mu (k+1)), c = (r+1)/(k+r+1).
SgdmSchedules sgdm_r_sweep_schedules(double mu, double r);

// ---------------------------------------------------------------------------
// Accelerated gradient in iterate-averaging form (deterministic):
//   c = 2/(k+2), y = (1-c) x + c z, z' = z - ((k+1)/(2L)) grad f(y),
//   x' = (1-c) x + c z'.

struct NesterovState {
  std::int64_t k = 0;
  Eigen::VectorXd x, z;
};

NesterovState make_nesterov_state(const Eigen::VectorXd& x0);

// Requires problem.constants.L and a full-gradient oracle.
void nesterov_step(NesterovState& state, const Problem& problem);

// ---------------------------------------------------------------------------
// Variance-reduced momentum method. State carries across epochs; each epoch
// re-snapshots at the carried-over iterate.

struct SvrgmState {
  std::int64_t s = 0;  // epochs completed
  std::int64_t t = 0;  // inner steps taken within the last epoch
  Eigen::VectorXd snapshot, snapshot_grad;
  Eigen::VectorXd x, z;
  Eigen::VectorXd x_prev;  // inner iterate preceding x (for diagnostics)
  std::int64_t m_s = 0;    // length of the epoch just run (m0 before any)
  std::int64_t grad_evals = 0;
};

// m0 seeds the pre-run diagnostic only; epochs receive their length
// explicitly.
SvrgmState make_svrgm_state(const Eigen::VectorXd& x0, std::int64_t m0);

// Runs one epoch of m inner steps: snapshot <- x, full gradient at the
// snapshot (n evaluations), then per inner step t = 0..m-1 samples component
// j and applies
//   g = grad f_j(x) - grad f_j(snapshot) + grad f(snapshot),
//   z' = z - eta g,  x' = (1 - c(t+1)) x + c(t+1) z'.
// The schedule is the coefficient sequence c_j; the coefficient applied at
// inner step t is c(t+1). grad_evals grows by n + 2m.
void svrgm_epoch(SvrgmState& state, const Problem& problem, double eta,
                 const Schedule& c, std::int64_t m, Rng& rng);

struct SvrgmPreset {
  double eta = 0.0;
  Schedule c;                    // coefficient sequence c_t
  std::function<std::int64_t(std::int64_t)> epoch_length;  // s -> m_s
};

// Convex preset: eta = 1/(6L), r = 1/2 inner momentum c_t = 1.5/(t + 1.5)
// (c_0 = 1 anchors the sequence; the first applied coefficient is c_1 = 0.6),
// epoch lengths m0, 2 m0, 4 m0...
SvrgmPreset preset_svrgm_convex(double L, std::int64_t m0);

// Strongly convex preset: kappa = L/mu, m = ceil(6 kappa) every epoch,
// constant c = (5/3)/(4 kappa + 1), eta = 1/(10L).
SvrgmPreset preset_svrgm_strongly_convex(double L, double mu);

enum class LyapunovMode { convex, strongly_convex };

// Epoch-level Lyapunov diagnostic. Convex mode:
//   (9L / (2 m_s)) ||z - x*||^2 + f(x) - f*.
// Strongly convex mode (lambda = 4 kappa):
//   f(x) - f* + (3/4) mu ||x - x* + lambda (x - x_prev)||^2.
// Requires the problem's minimizer and optimal value, plus L (and mu for the
// strongly convex mode).
double svrgm_lyapunov(const SvrgmState& state, const Problem& problem,
                      LyapunovMode mode);

// ---------------------------------------------------------------------------
// Dual averaging (deterministic oracle), unconstrained closed-form argmin:
//   s' = s + grad f(x_k),  x_{k+1} = x0 - s' / (gamma beta_{k+1}).

enum class BetaSource {
  factorial,            // beta_k = 1/(k+1)^(-1/2)
  nesterov_recursive,   // beta_0 = beta_1 = 1, beta_{k+1} = beta_k + 1/beta_k
};

struct DualAvgState {
  std::int64_t k = 0;
  Eigen::VectorXd x;  // current iterate x_k
  Eigen::VectorXd s;  // accumulated gradients
  BetaSource source = BetaSource::factorial;
  double beta_hat = 1.0;  // beta_k for the current index
};

DualAvgState make_dual_avg_state(const Eigen::VectorXd& x0, BetaSource source);

// Advances one step and returns the gradient that was evaluated at the
// pre-step iterate (callers accumulate it for gap estimates).
Eigen::VectorXd dual_avg_step(DualAvgState& state, const Problem& problem,
                              double gamma, const Eigen::VectorXd& x0);

// (1/(n+1)) max_{||x|| <= R} sum_i <g_i, x_i - x>
//   = (1/(n+1)) (sum_i <g_i, x_i> + R ||sum_i g_i||).
double duality_gap(
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& history,
    double R);

// ---------------------------------------------------------------------------
// Conditional gradient (Frank-Wolfe) with three step-coefficient sources.

enum class CondGradCoeff {
  open_loop,   // c_{k+1} = c_k - c_k^2 / 2, seeded c_0 = 1 (applied at k = 0)
  inverse_k,   // 1/(k+1)
  factorial,   // 2/(k+2)
};

struct CondGradState {
  std::int64_t k = 0;
  Eigen::VectorXd x;
  CondGradCoeff source = CondGradCoeff::factorial;
  double c_open = 1.0;  // carried open-loop coefficient
};

CondGradState make_cond_grad_state(const Eigen::VectorXd& x0,
                                   CondGradCoeff source);

using Lmo = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// p = lmo(grad f(x)); x' = (1 - c) x + c p with c from the state's source.
// All three sources apply c = 1 at the first step, so x_1 is feasible
// regardless of x_0.
void cond_grad_step(CondGradState& state, const Problem& problem,
                    const Lmo& lmo);

// Linear minimization over the R-ball at the origin: -R g/||g|| (0 for g=0).
Lmo make_ball_lmo(double R);

}  // namespace facopt
