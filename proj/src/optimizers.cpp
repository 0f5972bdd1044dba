#include "facopt/optimizers.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "facopt/averaging.hpp"
#include "facopt/facpow.hpp"

namespace facopt {

namespace {

void check_positive(const char* who, const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(who) + ": " + name +
                                " must be positive and finite");
  }
}

void check_coeff(const char* who, double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw std::invalid_argument(
        std::string(who) + ": averaging coefficient must lie in (0, 1], got " +
        std::to_string(c));
  }
}

Schedule facpow_eta(double r, double scale, std::int64_t offset) {
  auto sched = std::make_shared<FactorialSchedule>(r, scale, offset);
  return [sched](std::int64_t k) { return sched->value(k); };
}

Schedule momentum_schedule(double r) {
  return [r](std::int64_t k) { return momentum_coeff(k, r); };
}

}  // namespace

// ---------------------------------------------------------------------------
// Momentum SGD.

SgdmState make_sgdm_state(const Eigen::VectorXd& x0) {
  SgdmState state;
  state.x = x0;
  state.z = x0;
  return state;
}

void sgdm_step(SgdmState& state, const Problem& problem, double eta, double c,
               Rng& rng) {
  check_positive("sgdm_step", "step size", eta);
  check_coeff("sgdm_step", c);
  const Eigen::VectorXd g = problem.stochastic_grad(state.x, rng);
  state.z = problem.projection(state.z - eta * g);
  state.x = (1.0 - c) * state.x + c * state.z;
  ++state.k;
}

SgdmSchedules preset_sgdm_nonsmooth(double G, double R) {
  check_positive("preset_sgdm_nonsmooth", "G", G);
  check_positive("preset_sgdm_nonsmooth", "R", R);
  return {facpow_eta(-0.5, std::sqrt(0.5) * R / G, 1), momentum_schedule(0.0)};
}

SgdmSchedules preset_sgdm_strongly_convex(double mu) {
  check_positive("preset_sgdm_strongly_convex", "mu", mu);
  return {[mu](std::int64_t k) { return 1.0 / (mu * double(k + 1)); },
          momentum_schedule(3.0)};
}

SgdmSchedules preset_sgdm_sqrt_baseline(double G, double R) {
  check_positive("preset_sgdm_sqrt_baseline", "G", G);
  check_positive("preset_sgdm_sqrt_baseline", "R", R);
  return {[G, R](std::int64_t k) {
            return R / (G * std::sqrt(2.0 * double(k + 1)));
          },
          momentum_schedule(0.0)};
}

SgdmSchedules sgdm_r_sweep_schedules(double mu, double r) {
  check_positive("sgdm_r_sweep_schedules", "mu", mu);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(
        "sgdm_r_sweep_schedules: r must be nonnegative and finite");
  }
  return {[mu](std::int64_t k) { return 1.0 / (mu * double(k + 1)); },
          momentum_schedule(r)};
}

// ---------------------------------------------------------------------------
// Accelerated gradient.

NesterovState make_nesterov_state(const Eigen::VectorXd& x0) {
  NesterovState state;
  state.x = x0;
  state.z = x0;
  return state;
}

void nesterov_step(NesterovState& state, const Problem& problem) {
  if (!problem.full_grad) {
    throw std::invalid_argument(
        "nesterov_step: problem has no full-gradient oracle");
  }
  if (!problem.constants.L) {
    throw std::invalid_argument(
        "nesterov_step: problem is missing the smoothness constant L");
  }
  const double c = 2.0 / double(state.k + 2);
  const double rho = double(state.k + 1) / (2.0 * *problem.constants.L);
  const Eigen::VectorXd y = (1.0 - c) * state.x + c * state.z;
  state.z -= rho * problem.full_grad(y);
  state.x = (1.0 - c) * state.x + c * state.z;
  ++state.k;
}

// ---------------------------------------------------------------------------
// Variance-reduced momentum.

SvrgmState make_svrgm_state(const Eigen::VectorXd& x0, std::int64_t m0) {
  if (m0 < 1) {
    throw std::invalid_argument("make_svrgm_state: m0 must be at least 1");
  }
  SvrgmState state;
  state.x = x0;
  state.z = x0;
  state.x_prev = x0;
  state.snapshot = x0;
  state.snapshot_grad = Eigen::VectorXd::Zero(x0.size());
  state.m_s = m0;
  return state;
}

void svrgm_epoch(SvrgmState& state, const Problem& problem, double eta,
                 const Schedule& c, std::int64_t m, Rng& rng) {
  check_positive("svrgm_epoch", "step size", eta);
  if (m < 1) {
    throw std::invalid_argument("svrgm_epoch: epoch length must be at least 1");
  }
  if (!problem.component_grad || !problem.constants.n_components) {
    throw std::invalid_argument(
        "svrgm_epoch: problem has no component-gradient oracle");
  }
  const std::int64_t n = *problem.constants.n_components;
  state.snapshot = state.x;
  state.snapshot_grad = problem.full_grad(state.snapshot);
  state.grad_evals += n;
  for (std::int64_t t = 0; t < m; ++t) {
    const double ct = c(t + 1);
    check_coeff("svrgm_epoch", ct);
    const std::int64_t j = rng.uniform_index(n);
    const Eigen::VectorXd g = problem.component_grad(state.x, j) -
                              problem.component_grad(state.snapshot, j) +
                              state.snapshot_grad;
    state.grad_evals += 2;
    state.z -= eta * g;
    state.x_prev = state.x;
    state.x = (1.0 - ct) * state.x + ct * state.z;
  }
  state.t = m;
  state.m_s = m;
  ++state.s;
}

SvrgmPreset preset_svrgm_convex(double L, std::int64_t m0) {
  check_positive("preset_svrgm_convex", "L", L);
  if (m0 < 1) {
    throw std::invalid_argument("preset_svrgm_convex: m0 must be at least 1");
  }
  SvrgmPreset preset;
  preset.eta = 1.0 / (6.0 * L);
  preset.c = [](std::int64_t t) { return momentum_coeff(t, 0.5); };
  preset.epoch_length = [m0](std::int64_t s) {
    if (s < 0 || s > 40) {
      throw std::invalid_argument(
          "svrgm epoch schedule: epoch index out of range");
    }
    return m0 << s;
  };
  return preset;
}

SvrgmPreset preset_svrgm_strongly_convex(double L, double mu) {
  check_positive("preset_svrgm_strongly_convex", "L", L);
  check_positive("preset_svrgm_strongly_convex", "mu", mu);
  if (mu > L) {
    throw std::invalid_argument(
        "preset_svrgm_strongly_convex: mu must not exceed L");
  }
  const double kappa = L / mu;
  const double c = (5.0 / 3.0) / (4.0 * kappa + 1.0);
  const auto m = static_cast<std::int64_t>(std::ceil(6.0 * kappa));
  SvrgmPreset preset;
  preset.eta = 1.0 / (10.0 * L);
  preset.c = [c](std::int64_t) { return c; };
  preset.epoch_length = [m](std::int64_t) { return m; };
  return preset;
}

double svrgm_lyapunov(const SvrgmState& state, const Problem& problem,
                      LyapunovMode mode) {
  if (!problem.minimizer || !problem.value_at_opt) {
    throw std::invalid_argument(
        "svrgm_lyapunov: problem must carry its minimizer and optimal value");
  }
  if (!problem.constants.L) {
    throw std::invalid_argument("svrgm_lyapunov: problem is missing L");
  }
  const Eigen::VectorXd& x_star = *problem.minimizer;
  const double gap = problem.value(state.x) - *problem.value_at_opt;
  if (mode == LyapunovMode::convex) {
    return (9.0 * *problem.constants.L / (2.0 * double(state.m_s))) *
               (state.z - x_star).squaredNorm() +
           gap;
  }
  if (!problem.constants.mu) {
    throw std::invalid_argument("svrgm_lyapunov: problem is missing mu");
  }
  const double mu = *problem.constants.mu;
  const double lambda = 4.0 * (*problem.constants.L / mu);
  const Eigen::VectorXd v =
      state.x - x_star + lambda * (state.x - state.x_prev);
  return gap + 0.75 * mu * v.squaredNorm();
}

// ---------------------------------------------------------------------------
// Dual averaging.

DualAvgState make_dual_avg_state(const Eigen::VectorXd& x0, BetaSource source) {
  DualAvgState state;
  state.x = x0;
  state.s = Eigen::VectorXd::Zero(x0.size());
  state.source = source;
  state.beta_hat =
      source == BetaSource::factorial ? 1.0 / facpow(1.0, -0.5) : 1.0;
  return state;
}

Eigen::VectorXd dual_avg_step(DualAvgState& state, const Problem& problem,
                              double gamma, const Eigen::VectorXd& x0) {
  check_positive("dual_avg_step", "gamma", gamma);
  if (!problem.full_grad) {
    throw std::invalid_argument(
        "dual_avg_step: problem has no full-gradient oracle");
  }
  const Eigen::VectorXd g = problem.full_grad(state.x);
  state.s += g;
  double beta_next;
  if (state.source == BetaSource::factorial) {
    beta_next = 1.0 / facpow(double(state.k + 2), -0.5);
  } else {
    beta_next = state.k == 0 ? 1.0 : state.beta_hat + 1.0 / state.beta_hat;
  }
  state.beta_hat = beta_next;
  ++state.k;
  state.x = x0 - state.s / (gamma * beta_next);
  return g;
}

double duality_gap(
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& history,
    double R) {
  check_positive("duality_gap", "R", R);
  if (history.empty()) {
    throw std::invalid_argument("duality_gap: history is empty");
  }
  Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(history.front().first.size());
  double inner = 0.0;
  for (const auto& [x, g] : history) {
    inner += g.dot(x);
    g_sum += g;
  }
  return (inner + R * g_sum.norm()) / double(history.size());
}

// ---------------------------------------------------------------------------
// Conditional gradient.

CondGradState make_cond_grad_state(const Eigen::VectorXd& x0,
                                   CondGradCoeff source) {
  CondGradState state;
  state.x = x0;
  state.source = source;
  return state;
}

void cond_grad_step(CondGradState& state, const Problem& problem,
                    const Lmo& lmo) {
  if (!problem.full_grad) {
    throw std::invalid_argument(
        "cond_grad_step: problem has no full-gradient oracle");
  }
  if (!lmo) {
    throw std::invalid_argument("cond_grad_step: lmo is empty");
  }
  double c = 0.0;
  switch (state.source) {
    case CondGradCoeff::open_loop:
      c = state.c_open;
      break;
    case CondGradCoeff::inverse_k:
      c = 1.0 / double(state.k + 1);
      break;
    case CondGradCoeff::factorial:
      c = 2.0 / double(state.k + 2);
      break;
  }
  const Eigen::VectorXd p = lmo(problem.full_grad(state.x));
  state.x = (1.0 - c) * state.x + c * p;
  if (state.source == CondGradCoeff::open_loop) {
    state.c_open -= 0.5 * state.c_open * state.c_open;
  }
  ++state.k;
}

Lmo make_ball_lmo(double R) {
  check_positive("make_ball_lmo", "R", R);
  return [R](const Eigen::VectorXd& g) -> Eigen::VectorXd {
    const double norm = g.norm();
    if (norm == 0.0) {
      return Eigen::VectorXd::Zero(g.size());
    }
    return (-R / norm) * g;
  };
}

}  // namespace facopt
