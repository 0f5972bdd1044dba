#pragma once

// Benchmark objectives with explicit oracles and declared constants, plus
// LIBSVM-format dataset ingestion and deterministic synthetic fixtures.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facopt/rng.hpp"

namespace facopt {

// Declared analytic constants. Absent means unknown/not applicable, and
// consumers (bound evaluators, presets) must fail loudly rather than guess.
struct ProblemConstants {
  std::optional<double> G;       // subgradient norm bound on the feasible set
  std::optional<double> L;       // gradient smoothness bound
  std::optional<double> mu;      // strong-convexity modulus
  std::optional<double> R;       // feasible-ball radius (centered at origin)
  std::optional<double> sigma2;  // stochastic-gradient variance at the optimum
  std::optional<std::int64_t> n_components;
};

// An objective with oracles. Problems are immutable after construction; all
// oracle calls are pure given the explicit RNG argument.
struct Problem {
  int dim = 0;
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::optional<double> value_at_opt;
  std::optional<Eigen::VectorXd> minimizer;
  ProblemConstants constants;

  // Subgradient at x using one sampled component (batch size 1); equals
  // full_grad for deterministic problems.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, Rng&)> stochastic_grad;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> full_grad;
  // Present only when the objective is a finite average; index in
  // [0, n_components).
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, std::int64_t)>
      component_grad;
  // Identity when the problem is unconstrained.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> projection;
};

// Sparse sample row; feature indices are 0-based and strictly increasing.
struct DatasetRow {
  int label = 0;  // dense class id in [0, n_classes)
  std::vector<std::pair<int, double>> features;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  int n_features = 0;
  int n_classes = 0;
};

struct ParseError : std::runtime_error {
  ParseError(std::int64_t line, const std::string& what);
  std::int64_t line;  // 1-based line number in the input stream
};

// Euclidean projection onto the ball of radius R around center.
Eigen::VectorXd project_ball(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& center, double R);

// Reads "label idx:val idx:val ..." lines (indices 1-based and strictly
// increasing per line). Blank lines are skipped; '#' starts a comment that
// runs to end of line. Labels are mapped to dense ids 0..n_classes-1 in
// ascending label order. Malformed input raises ParseError with the
// offending line number.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm_file(const std::string& path);

// Writes rows in the same format (1-based indices, full double precision).
// Labels are written as the dense class ids, so a write/parse round trip is
// exact.
void write_libsvm(const Dataset& data, std::ostream& out);

// Deterministic Gaussian-blob classification fixture: per-class centers drawn
// N(0, center_scale^2), balanced labels (row i gets class i mod classes),
// rows center + noise * N(0, I) then L2-normalized, and floor(flip * rows)
// rows relabeled to a uniformly chosen different class. All draws come from
// Rng(seed), so the dataset is a pure function of its arguments.
Dataset make_blobs_dataset(int rows, int classes, int features,
                           double center_scale, double noise, double flip,
                           std::uint64_t seed);

// f(x) = G ||x - x_star||, constrained to the R-ball around the origin.
// Exact minimizer x_star (value 0), deterministic subgradient of norm G away
// from it. Requires ||x_star|| <= R.
Problem make_distance_problem(const Eigen::VectorXd& x_star, double G,
                              double R);

// f(x) = 0.5 ||Ax - b||^2 with component form f_i = (n/2)(a_i' x - b_i)^2.
// L and mu are the extreme eigenvalues of A'A; requires full column rank.
Problem make_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// f(x) = 0.5 ||Ax - b||^2 + (lambda/2)||x||^2 with components
// f_i = (n/2)(a_i' x - b_i)^2 + (lambda/2)||x||^2. Declares the COMPONENT
// smoothness bound L = max_i n ||a_i||^2 + lambda (also valid for f), which
// is the constant variance-reduced step sizes need; mu = lambda_min(A'A) +
// lambda. Requires lambda > 0.
Problem make_ridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                   double lambda);

// Multiclass hinge loss (max over wrong classes of 1 + s_wrong - s_correct,
// clamped at 0) averaged over rows, plus (weight_decay/2)||W||^2. The flat
// parameter vector stores W row-major: W(c, j) = x[c * n_features + j].
// With weight_decay > 0 the problem is constrained to the ball of radius
// R = sqrt(2 / weight_decay) (the f(0) = 1 level set), mu = weight_decay,
// and G = 2 max_row_norm + weight_decay * R (an estimate; subgradients on
// the ball obey it). Ties in the violating class pick the smallest index.
Problem make_multiclass_svm(const Dataset& data, double weight_decay);

}  // namespace facopt
