#include "facopt/runner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "facopt/optimizers.hpp"
#include "facopt/rng.hpp"

namespace facopt {

namespace {

Eigen::VectorXd gaussian_vector(std::int64_t n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    v(i) = rng.normal();
  }
  return v;
}

Eigen::MatrixXd gaussian_matrix(std::int64_t rows, std::int64_t cols,
                                Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

void require_range(const char* what, std::int64_t value, std::int64_t min) {
  if (value < min) {
    throw ConfigError(std::string(what) + " must be at least " +
                      std::to_string(min) + ", got " + std::to_string(value));
  }
}

void require_constants(
    const std::string& what,
    const std::vector<std::pair<const char*, bool>>& needs) {
  std::string missing;
  for (const auto& [name, present] : needs) {
    if (!present) {
      if (!missing.empty()) {
        missing += ", ";
      }
      missing += name;
    }
  }
  if (!missing.empty()) {
    throw ConfigError(what + " needs problem constants: " + missing);
  }
}

void require_choice(const char* key, const std::string& value,
                    const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), value) != allowed.end()) {
    return;
  }
  std::string known;
  for (const std::string& name : allowed) {
    if (!known.empty()) {
      known += ", ";
    }
    known += name;
  }
  throw ConfigError(std::string("config key '") + key + "': unknown value '" +
                    value + "' (known: " + known + ")");
}

SgdmSchedules sgdm_schedules_for(const RunConfig& config,
                                 const Problem& problem) {
  const ProblemConstants& c = problem.constants;
  const std::string what =
      "sgd_momentum preset '" + config.preset + "'";
  if (config.preset == "nonsmooth") {
    require_constants(what, {{"G", c.G.has_value()}, {"R", c.R.has_value()}});
    return preset_sgdm_nonsmooth(*c.G, *c.R);
  }
  if (config.preset == "strongly-convex") {
    require_constants(what, {{"mu", c.mu.has_value()}});
    return preset_sgdm_strongly_convex(*c.mu);
  }
  if (config.preset == "sqrt-baseline") {
    require_constants(what, {{"G", c.G.has_value()}, {"R", c.R.has_value()}});
    return preset_sgdm_sqrt_baseline(*c.G, *c.R);
  }
  require_constants(what, {{"mu", c.mu.has_value()}});
  return sgdm_r_sweep_schedules(*c.mu, config.r);
}

}  // namespace

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::sgd_momentum:
      return "sgd_momentum";
    case MethodKind::nesterov:
      return "nesterov";
    case MethodKind::svrg_momentum:
      return "svrg_momentum";
    case MethodKind::dual_averaging:
      return "dual_averaging";
    case MethodKind::conditional_gradient:
      return "conditional_gradient";
  }
  throw std::logic_error("to_string: unknown method kind");
}

MethodKind method_kind_from_string(const std::string& name) {
  for (MethodKind kind :
       {MethodKind::sgd_momentum, MethodKind::nesterov,
        MethodKind::svrg_momentum, MethodKind::dual_averaging,
        MethodKind::conditional_gradient}) {
    if (name == to_string(kind)) {
      return kind;
    }
  }
  throw ConfigError(
      "unknown method '" + name +
      "' (known: sgd_momentum, nesterov, svrg_momentum, dual_averaging, "
      "conditional_gradient)");
}

RunConfig RunConfig::from_config(Config& config) {
  RunConfig rc;

  rc.problem_kind = config.get_string("problem");
  require_choice("problem", rc.problem_kind,
                 {"distance", "quadratic", "ridge", "svm"});
  rc.problem_seed =
      static_cast<std::uint64_t>(config.get_int("problem.seed", 0));
  if (rc.problem_kind == "distance") {
    rc.dim = config.get_int("problem.dim");
    require_range("problem.dim", rc.dim, 1);
    rc.g = config.get_double("problem.g", 1.0);
    rc.radius = config.get_double("problem.radius", 1.0);
    rc.xstar_norm = config.get_double("problem.xstar_norm", 1.0);
  } else if (rc.problem_kind == "quadratic" || rc.problem_kind == "ridge") {
    rc.rows = config.get_int("problem.rows");
    rc.dim = config.get_int("problem.dim");
    require_range("problem.rows", rc.rows, 1);
    require_range("problem.dim", rc.dim, 1);
    rc.noise = config.get_double("problem.noise", 0.5);
    if (rc.problem_kind == "ridge") {
      rc.lambda = config.get_double("problem.lambda");
      if (!(rc.lambda > 0.0)) {
        throw ConfigError("problem.lambda must be positive");
      }
    }
  } else {
    rc.data_path = config.get_string("problem.data");
    rc.weight_decay = config.get_double("problem.weight_decay", 1e-3);
  }

  rc.method = method_kind_from_string(config.get_string("method"));
  switch (rc.method) {
    case MethodKind::sgd_momentum:
      rc.preset = config.get_string("method.preset");
      require_choice("method.preset", rc.preset,
                     {"nonsmooth", "strongly-convex", "sqrt-baseline",
                      "r-sweep"});
      if (rc.preset == "r-sweep") {
        rc.r = config.get_double("method.r");
      }
      break;
    case MethodKind::nesterov:
      break;
    case MethodKind::svrg_momentum:
      rc.preset = config.get_string("method.preset");
      require_choice("method.preset", rc.preset, {"convex", "strongly-convex"});
      if (rc.preset == "convex") {
        rc.m0 = config.get_int("method.m0");
        require_range("method.m0", rc.m0, 1);
      }
      break;
    case MethodKind::dual_averaging:
      rc.beta = config.get_string("method.beta", "factorial");
      require_choice("method.beta", rc.beta, {"factorial", "recursive"});
      break;
    case MethodKind::conditional_gradient:
      rc.coeff = config.get_string("method.coeff", "factorial");
      require_choice("method.coeff", rc.coeff,
                     {"open-loop", "inverse-k", "factorial"});
      break;
  }

  rc.steps = config.get_int(
      rc.method == MethodKind::svrg_momentum ? "epochs" : "steps");
  require_range(rc.method == MethodKind::svrg_momentum ? "epochs" : "steps",
                rc.steps, 0);
  rc.seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
  rc.checkpoint_stride = config.get_int("checkpoint_stride", 1);
  require_range("checkpoint_stride", rc.checkpoint_stride, 1);
  if (config.has("bound")) {
    try {
      rc.bound = bound_kind_from_string(config.get_string("bound"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  config.finish();
  return rc;
}

Problem build_problem(const RunConfig& config) {
  Rng rng(config.problem_seed);
  if (config.problem_kind == "distance") {
    Eigen::VectorXd x_star = Eigen::VectorXd::Zero(config.dim);
    if (config.xstar_norm > 0.0) {
      x_star = gaussian_vector(config.dim, rng);
      x_star *= config.xstar_norm / x_star.norm();
    }
    return make_distance_problem(x_star, config.g, config.radius);
  }
  if (config.problem_kind == "quadratic" || config.problem_kind == "ridge") {
    Eigen::MatrixXd A = gaussian_matrix(config.rows, config.dim, rng);
    if (config.problem_kind == "ridge") {
      for (std::int64_t i = 0; i < config.rows; ++i) {
        A.row(i) /= A.row(i).norm();
      }
    }
    const Eigen::VectorXd x_true = gaussian_vector(config.dim, rng);
    const Eigen::VectorXd b =
        A * x_true + config.noise * gaussian_vector(config.rows, rng);
    return config.problem_kind == "ridge" ? make_ridge(A, b, config.lambda)
                                          : make_quadratic(A, b);
  }
  const Dataset data = parse_libsvm_file(config.data_path);
  return make_multiclass_svm(data, config.weight_decay);
}

Trace run(const RunConfig& config) {
  const Problem problem = build_problem(config);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(problem.dim);

  std::optional<BoundSpec> bound;
  if (config.bound) {
    BoundConstants bc;
    bc.G = problem.constants.G;
    bc.L = problem.constants.L;
    bc.mu = problem.constants.mu;
    bc.R = problem.constants.R;
    if (problem.minimizer) {
      bc.D0 = (x0 - *problem.minimizer).norm();
    }
    if (problem.value_at_opt) {
      bc.gap0 = problem.value(x0) - *problem.value_at_opt;
    }
    if (config.m0 > 0) {
      bc.m0 = config.m0;
    }
    try {
      bound = make_bound(*config.bound, bc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  auto bound_at = [&](std::int64_t n) {
    return bound ? bound_value(*bound, n)
                 : std::numeric_limits<double>::quiet_NaN();
  };
  auto gap_of = [&](const Eigen::VectorXd& x) {
    const double value = problem.value(x);
    return problem.value_at_opt ? value - *problem.value_at_opt : value;
  };
  auto want = [&](std::int64_t step) {
    return step % config.checkpoint_stride == 0 || step == config.steps;
  };
  const std::int64_t full_cost = problem.constants.n_components.value_or(1);

  Trace trace;
  auto record = [&](std::int64_t step, std::int64_t evals, double gap) {
    trace.rows.push_back({step, evals, gap, bound_at(step)});
  };

  Rng rng(config.seed);
  switch (config.method) {
    case MethodKind::sgd_momentum: {
      const SgdmSchedules sched = sgdm_schedules_for(config, problem);
      SgdmState state = make_sgdm_state(x0);
      record(0, 0, gap_of(state.x));
      for (std::int64_t k = 0; k < config.steps; ++k) {
        sgdm_step(state, problem, sched.eta(k), sched.c(k), rng);
        if (want(k + 1)) {
          record(k + 1, k + 1, gap_of(state.x));
        }
      }
      break;
    }
    case MethodKind::nesterov: {
      require_constants("nesterov",
                        {{"L", problem.constants.L.has_value()}});
      NesterovState state = make_nesterov_state(x0);
      record(0, 0, gap_of(state.x));
      for (std::int64_t k = 0; k < config.steps; ++k) {
        nesterov_step(state, problem);
        if (want(k + 1)) {
          record(k + 1, (k + 1) * full_cost, gap_of(state.x));
        }
      }
      break;
    }
    case MethodKind::svrg_momentum: {
      if (!problem.component_grad) {
        throw ConfigError("svrg_momentum needs a finite-sum problem with "
                          "component gradients; '" +
                          config.problem_kind + "' has none");
      }
      const std::string what = "svrg_momentum preset '" + config.preset + "'";
      SvrgmPreset preset;
      if (config.preset == "convex") {
        require_constants(what, {{"L", problem.constants.L.has_value()}});
        preset = preset_svrgm_convex(*problem.constants.L, config.m0);
      } else {
        require_constants(what, {{"L", problem.constants.L.has_value()},
                                 {"mu", problem.constants.mu.has_value()}});
        preset = preset_svrgm_strongly_convex(*problem.constants.L,
                                              *problem.constants.mu);
      }
      SvrgmState state = make_svrgm_state(x0, preset.epoch_length(0));
      record(0, 0, gap_of(state.x));
      for (std::int64_t s = 0; s < config.steps; ++s) {
        svrgm_epoch(state, problem, preset.eta, preset.c,
                    preset.epoch_length(s), rng);
        if (want(s + 1)) {
          record(s + 1, state.grad_evals, gap_of(state.x));
        }
      }
      break;
    }
    case MethodKind::dual_averaging: {
      require_constants("dual_averaging",
                        {{"G", problem.constants.G.has_value()},
                         {"R", problem.constants.R.has_value()}});
      const double G = *problem.constants.G;
      const double R = *problem.constants.R;
      const double gamma =
          config.beta == "factorial" ? G / R : G / (std::sqrt(2.0) * R);
      DualAvgState state = make_dual_avg_state(
          x0, config.beta == "factorial" ? BetaSource::factorial
                                         : BetaSource::nesterov_recursive);
      Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(problem.dim);
      double inner = 0.0;
      for (std::int64_t n = 0; n <= config.steps; ++n) {
        const Eigen::VectorXd x_pre = state.x;
        const Eigen::VectorXd g = dual_avg_step(state, problem, gamma, x0);
        inner += g.dot(x_pre);
        g_sum += g;
        if (want(n)) {
          const double gap = (inner + R * g_sum.norm()) / double(n + 1);
          record(n, (n + 1) * full_cost, gap);
        }
      }
      break;
    }
    case MethodKind::conditional_gradient: {
      require_constants("conditional_gradient",
                        {{"R", problem.constants.R.has_value()}});
      const Lmo lmo = make_ball_lmo(*problem.constants.R);
      CondGradCoeff source = CondGradCoeff::factorial;
      if (config.coeff == "open-loop") {
        source = CondGradCoeff::open_loop;
      } else if (config.coeff == "inverse-k") {
        source = CondGradCoeff::inverse_k;
      }
      CondGradState state = make_cond_grad_state(x0, source);
      record(0, 0, gap_of(state.x));
      for (std::int64_t k = 0; k < config.steps; ++k) {
        cond_grad_step(state, problem, lmo);
        if (want(k + 1)) {
          record(k + 1, (k + 1) * full_cost, gap_of(state.x));
        }
      }
      break;
    }
  }
  return trace;
}

Aggregate bench(const RunConfig& config, int seeds, int jobs) {
  if (seeds < 2) {
    throw std::invalid_argument("bench: need at least 2 seeds");
  }
  jobs = std::clamp(jobs, 1, seeds);
  std::vector<Trace> traces(static_cast<std::size_t>(seeds));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(seeds));

  auto work = [&](int first) {
    for (int i = first; i < seeds; i += jobs) {
      try {
        RunConfig per_seed = config;
        per_seed.seed = config.seed ^ static_cast<std::uint64_t>(i);
        traces[static_cast<std::size_t>(i)] = run(per_seed);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back(work, t);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  for (int i = 0; i < seeds; ++i) {
    if (errors[static_cast<std::size_t>(i)]) {
      try {
        std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
      } catch (const ConfigError& e) {
        throw ConfigError("bench: seed index " + std::to_string(i) +
                          " failed: " + e.what());
      } catch (const std::exception& e) {
        throw std::runtime_error("bench: seed index " + std::to_string(i) +
                                 " failed: " + e.what());
      }
    }
  }

  const Problem probe = build_problem(config);
  if (!probe.value_at_opt) {
    // Unknown optimum: report gaps against the best value seen anywhere in
    // the ensemble.
    double best = std::numeric_limits<double>::infinity();
    for (const Trace& trace : traces) {
      for (const TraceRow& row : trace.rows) {
        best = std::min(best, row.f_gap);
      }
    }
    for (Trace& trace : traces) {
      for (TraceRow& row : trace.rows) {
        row.f_gap -= best;
      }
    }
  }
  return aggregate_traces(traces);
}

CheckReport check_trace(const Trace& trace, double slack) {
  if (!(slack >= 1.0)) {
    throw std::invalid_argument("check: slack must be at least 1");
  }
  if (trace.rows.empty()) {
    throw std::invalid_argument("check: empty trace");
  }
  CheckReport report;
  for (const TraceRow& row : trace.rows) {
    if (std::isnan(row.bound)) {
      throw std::invalid_argument(
          "check: trace has no bound column (nan at step " +
          std::to_string(row.step) + ")");
    }
    double ratio = 0.0;
    if (row.f_gap > 0.0) {
      ratio = row.f_gap / row.bound;
    }
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_step = row.step;
    }
    if (row.f_gap > slack * row.bound) {
      report.pass = false;
    }
    ++report.rows_checked;
  }
  return report;
}

}  // namespace facopt
