#pragma once

// Experiment execution: a RunConfig binds one problem instance and one
// method; run() produces a deterministic trace, bench() aggregates a seed
// ensemble, check_trace() verifies a trace against its bound column.
//
// Conventions shared by every run: the start point is the origin, and the
// trace records a checkpoint at every multiple of checkpoint_stride plus the
// final step. For most methods row `step` holds the gap of the averaged
// iterate after that many steps (row 0 is the initial point). Dual averaging
// instead reports the duality gap over the first step+1 oracle calls, the
// exact quantity its bound indexes, so its first row already reflects one
// gradient evaluation.

#include <cstdint>
#include <optional>
#include <string>

#include "facopt/bounds.hpp"
#include "facopt/config.hpp"
#include "facopt/problems.hpp"
#include "facopt/quantiles.hpp"
#include "facopt/trace.hpp"

namespace facopt {

enum class MethodKind {
  sgd_momentum,
  nesterov,
  svrg_momentum,
  dual_averaging,
  conditional_gradient,
};

std::string to_string(MethodKind kind);
MethodKind method_kind_from_string(const std::string& name);

struct RunConfig {
  // Problem instance (a pure function of kind, parameters, problem_seed).
  std::string problem_kind;  // distance | quadratic | ridge | svm
  std::uint64_t problem_seed = 0;
  std::int64_t dim = 0;
  std::int64_t rows = 0;
  double noise = 0.5;
  double lambda = 0.0;
  double g = 1.0;
  double radius = 1.0;
  double xstar_norm = 1.0;
  std::string data_path;
  double weight_decay = 1e-3;

  // Method.
  MethodKind method = MethodKind::sgd_momentum;
  std::string preset;
  double r = 0.0;        // momentum power for the sgdm r-sweep preset
  std::int64_t m0 = 0;   // first epoch length for the svrgm convex preset
  std::string beta;      // dual averaging: factorial | recursive
  std::string coeff;     // conditional gradient: open-loop | inverse-k | factorial

  // Execution.
  std::int64_t steps = 0;  // epochs when method == svrg_momentum
  std::uint64_t seed = 0;
  std::int64_t checkpoint_stride = 1;
  std::optional<BoundKind> bound;

  // Consumes the recognized keys and calls finish(), so unknown keys raise
  // ConfigError. Validation that needs the constructed problem (constant
  // availability) happens in run().
  static RunConfig from_config(Config& config);
};

// Rebuilds the configured problem instance (deterministic).
Problem build_problem(const RunConfig& config);

// Executes one run. Throws ConfigError when the problem lacks a constant the
// method or bound needs (all missing names listed).
Trace run(const RunConfig& config);

// Runs seed indices 0..seeds-1, each with run-seed = config.seed XOR index,
// optionally on `jobs` threads, and aggregates per-checkpoint quantiles of
// f_gap. On problems with an unknown optimum the raw objective values are
// first shifted by the best value seen anywhere in the ensemble (empirical
// gap). A failing run aborts the ensemble naming the failing seed index.
Aggregate bench(const RunConfig& config, int seeds, int jobs = 1);

struct CheckReport {
  bool pass = true;
  double worst_ratio = 0.0;     // max over rows of f_gap / bound
  std::int64_t worst_step = -1;
  std::int64_t rows_checked = 0;
};

// PASS iff f_gap <= slack * bound at every row, using the trace's bound
// column. Throws std::invalid_argument when any bound entry is nan (the
// trace was produced without a bound) or slack < 1.
CheckReport check_trace(const Trace& trace, double slack);

}  // namespace facopt
