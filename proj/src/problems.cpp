#include "facopt/problems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace facopt {

ParseError::ParseError(std::int64_t ln, const std::string& what)
    : std::runtime_error("line " + std::to_string(ln) + ": " + what),
      line(ln) {}

Eigen::VectorXd project_ball(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& center, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("project_ball: R must be > 0");
  const Eigen::VectorXd d = x - center;
  const double n = d.norm();
  if (n <= R) return x;
  return center + (R / n) * d;
}

namespace {

bool parse_int(const std::string& tok, long long* out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

bool parse_double(const std::string& tok, double* out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  struct RawRow {
    long long label;
    std::vector<std::pair<int, double>> features;  // still 0-based here
  };
  std::vector<RawRow> raw;
  std::map<long long, int> label_ids;
  int max_feature = -1;

  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream toks(line);
    std::string tok;
    if (!(toks >> tok)) continue;  // blank line

    RawRow row;
    if (!parse_int(tok, &row.label)) {
      throw ParseError(lineno, "malformed label '" + tok + "'");
    }
    int prev_index = 0;  // source indices are 1-based
    while (toks >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ParseError(lineno, "malformed token '" + tok +
                                     "' (expected idx:val)");
      }
      long long idx;
      double val;
      if (!parse_int(tok.substr(0, colon), &idx) || idx < 1) {
        throw ParseError(lineno, "malformed feature index in '" + tok + "'");
      }
      if (!parse_double(tok.substr(colon + 1), &val)) {
        throw ParseError(lineno, "non-numeric feature value in '" + tok + "'");
      }
      if (idx <= prev_index) {
        throw ParseError(lineno, "feature index " + std::to_string(idx) +
                                     " does not increase");
      }
      if (idx > std::numeric_limits<int>::max()) {
        throw ParseError(lineno, "feature index out of range");
      }
      prev_index = static_cast<int>(idx);
      row.features.emplace_back(static_cast<int>(idx) - 1, val);
      max_feature = std::max(max_feature, static_cast<int>(idx) - 1);
    }
    label_ids.emplace(row.label, 0);
    raw.push_back(std::move(row));
  }

  int next_id = 0;
  for (auto& [label, id] : label_ids) id = next_id++;  // ascending label order

  Dataset data;
  data.n_features = max_feature + 1;
  data.n_classes = next_id;
  data.rows.reserve(raw.size());
  for (auto& r : raw) {
    DatasetRow out;
    out.label = label_ids.at(r.label);
    out.features = std::move(r.features);
    data.rows.push_back(std::move(out));
  }
  return data;
}

Dataset parse_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  return parse_libsvm(in);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  char buf[64];
  for (const auto& row : data.rows) {
    out << row.label;
    for (const auto& [idx, val] : row.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", val);
      out << ' ' << (idx + 1) << ':' << buf;
    }
    out << '\n';
  }
}

Dataset make_blobs_dataset(int rows, int classes, int features,
                           double center_scale, double noise, double flip,
                           std::uint64_t seed) {
  if (rows < 1 || classes < 2 || features < 1) {
    throw std::invalid_argument("make_blobs_dataset: bad shape");
  }
  if (!(flip >= 0.0 && flip < 1.0)) {
    throw std::invalid_argument("make_blobs_dataset: flip must be in [0, 1)");
  }
  Rng rng(seed);

  Eigen::MatrixXd centers(classes, features);
  for (int c = 0; c < classes; ++c)
    for (int j = 0; j < features; ++j) centers(c, j) = center_scale * rng.normal();

  std::vector<int> labels(rows);
  Eigen::MatrixXd x(rows, features);
  for (int i = 0; i < rows; ++i) {
    labels[i] = i % classes;
    for (int j = 0; j < features; ++j) {
      x(i, j) = centers(labels[i], j) + noise * rng.normal();
    }
    const double n = std::max(x.row(i).norm(), 1e-12);
    x.row(i) /= n;
  }

  // Partial Fisher-Yates picks the flip rows without replacement; each picked
  // row moves to a uniformly chosen different class.
  const int nflip = static_cast<int>(flip * rows);
  std::vector<int> order(rows);
  for (int i = 0; i < rows; ++i) order[i] = i;
  for (int i = 0; i < nflip; ++i) {
    const auto j = i + rng.uniform_index(rows - i);
    std::swap(order[i], order[j]);
  }
  for (int i = 0; i < nflip; ++i) {
    const int row = order[i];
    const auto shift = 1 + rng.uniform_index(classes - 1);
    labels[row] = static_cast<int>((labels[row] + shift) % classes);
  }

  Dataset data;
  data.n_features = features;
  data.n_classes = classes;
  data.rows.resize(rows);
  for (int i = 0; i < rows; ++i) {
    data.rows[i].label = labels[i];
    data.rows[i].features.reserve(features);
    for (int j = 0; j < features; ++j) {
      data.rows[i].features.emplace_back(j, x(i, j));
    }
  }
  return data;
}

Problem make_distance_problem(const Eigen::VectorXd& x_star, double G,
                              double R) {
  if (!(G > 0.0) || !(R > 0.0)) {
    throw std::invalid_argument("make_distance_problem: G and R must be > 0");
  }
  if (x_star.norm() > R) {
    throw std::invalid_argument(
        "make_distance_problem: x_star lies outside the R-ball");
  }
  Problem p;
  p.dim = static_cast<int>(x_star.size());
  p.name = "distance";
  p.value = [x_star, G](const Eigen::VectorXd& x) {
    return G * (x - x_star).norm();
  };
  p.value_at_opt = 0.0;
  p.minimizer = x_star;
  p.constants.G = G;
  p.constants.R = R;
  auto grad = [x_star, G](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd d = x - x_star;
    const double n = d.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(x.size());
    return (G / n) * d;
  };
  p.full_grad = grad;
  p.stochastic_grad = [grad](const Eigen::VectorXd& x, Rng&) {
    return grad(x);
  };
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(x_star.size());
  p.projection = [center, R](const Eigen::VectorXd& x) {
    return project_ball(x, center, R);
  };
  return p;
}

namespace {

// Shared least-squares scaffolding for the quadratic and ridge factories.
Problem finite_sum_least_squares(const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& b, double lambda,
                                 double declared_L, double declared_mu,
                                 const char* name) {
  const auto n = a.rows();
  const auto d = a.cols();
  Problem p;
  p.dim = static_cast<int>(d);
  p.name = name;

  Eigen::MatrixXd h = a.transpose() * a +
                      lambda * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd rhs = a.transpose() * b;
  Eigen::VectorXd xstar = h.ldlt().solve(rhs);

  auto value = [a, b, lambda](const Eigen::VectorXd& x) {
    const double ls = 0.5 * (a * x - b).squaredNorm();
    return lambda == 0.0 ? ls : ls + 0.5 * lambda * x.squaredNorm();
  };
  p.value = value;
  p.minimizer = xstar;
  p.value_at_opt = value(xstar);
  p.constants.L = declared_L;
  p.constants.mu = declared_mu;
  p.constants.n_components = n;

  p.full_grad = [a, b, lambda](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g = a.transpose() * (a * x - b);
    if (lambda != 0.0) g += lambda * x;
    return g;
  };
  const double nd = static_cast<double>(n);
  auto comp = [a, b, lambda, nd](const Eigen::VectorXd& x,
                                 std::int64_t i) -> Eigen::VectorXd {
    const double resid = a.row(i).dot(x) - b(i);
    Eigen::VectorXd g = nd * resid * a.row(i).transpose();
    if (lambda != 0.0) g += lambda * x;
    return g;
  };
  p.component_grad = comp;
  p.stochastic_grad = [comp, n](const Eigen::VectorXd& x,
                                Rng& rng) -> Eigen::VectorXd {
    return comp(x, rng.uniform_index(n));
  };
  p.projection = [](const Eigen::VectorXd& x) { return x; };

  // Variance of the component gradient at the optimum (declared, unused by
  // any bound; recorded for completeness).
  double s2 = 0.0;
  const Eigen::VectorXd gfull = p.full_grad(xstar);
  for (std::int64_t i = 0; i < n; ++i) {
    s2 += (comp(xstar, i) - gfull).squaredNorm();
  }
  p.constants.sigma2 = s2 / static_cast<double>(n);
  return p;
}

}  // namespace

Problem make_quadratic(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("make_quadratic: A rows must match b length");
  }
  if (a.rows() < a.cols()) {
    throw std::invalid_argument(
        "make_quadratic: fewer rows than columns cannot have full column "
        "rank");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) {
    throw std::invalid_argument(
        "make_quadratic: A is rank deficient (no unique minimizer)");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  const auto& ev = es.eigenvalues();
  return finite_sum_least_squares(a, b, 0.0, ev.maxCoeff(), ev.minCoeff(),
                                  "quadratic");
}

Problem make_ridge(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                   double lambda) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("make_ridge: A rows must match b length");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("make_ridge: lambda must be > 0");
  }
  const double nd = static_cast<double>(a.rows());
  double max_row = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    max_row = std::max(max_row, a.row(i).squaredNorm());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  const double declared_L = nd * max_row + lambda;  // component smoothness
  const double declared_mu = es.eigenvalues().minCoeff() + lambda;
  return finite_sum_least_squares(a, b, lambda, declared_L, declared_mu,
                                  "ridge");
}

namespace {

struct SvmCore {
  Eigen::MatrixXd x;       // rows x features, dense
  std::vector<int> y;
  int classes = 0;
  int features = 0;
  double wd = 0.0;

  // Hinge term of row i at flat weights w; reports the violating class.
  double row_margin(const Eigen::VectorXd& w, std::int64_t i,
                    int* violator) const {
    const auto xi = x.row(i);
    double s_correct = 0.0;
    const int yi = y[static_cast<std::size_t>(i)];
    s_correct = w.segment(yi * features, features).dot(xi);
    double best = -std::numeric_limits<double>::infinity();
    int best_c = -1;
    for (int c = 0; c < classes; ++c) {
      if (c == yi) continue;
      const double m =
          1.0 + w.segment(c * features, features).dot(xi) - s_correct;
      if (m > best) {  // strict: ties keep the smallest class index
        best = m;
        best_c = c;
      }
    }
    *violator = best_c;
    return best;
  }
};

}  // namespace

Problem make_multiclass_svm(const Dataset& data, double weight_decay) {
  if (data.rows.empty()) {
    throw std::invalid_argument("make_multiclass_svm: empty dataset");
  }
  if (data.n_classes < 2) {
    throw std::invalid_argument("make_multiclass_svm: needs >= 2 classes");
  }
  if (weight_decay < 0.0) {
    throw std::invalid_argument(
        "make_multiclass_svm: weight_decay must be >= 0");
  }

  auto core = std::make_shared<SvmCore>();
  core->classes = data.n_classes;
  core->features = data.n_features;
  core->wd = weight_decay;
  const auto n = static_cast<std::int64_t>(data.rows.size());
  core->x = Eigen::MatrixXd::Zero(n, data.n_features);
  core->y.resize(data.rows.size());
  double max_row_norm = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& row = data.rows[static_cast<std::size_t>(i)];
    core->y[static_cast<std::size_t>(i)] = row.label;
    for (const auto& [idx, val] : row.features) core->x(i, idx) = val;
    max_row_norm = std::max(max_row_norm, core->x.row(i).norm());
  }

  Problem p;
  p.dim = data.n_classes * data.n_features;
  p.name = "multiclass_svm";
  p.constants.n_components = n;

  p.value = [core, n](const Eigen::VectorXd& w) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      int violator;
      acc += std::max(0.0, core->row_margin(w, i, &violator));
    }
    double v = acc / static_cast<double>(n);
    if (core->wd > 0.0) v += 0.5 * core->wd * w.squaredNorm();
    return v;
  };

  auto comp = [core](const Eigen::VectorXd& w,
                     std::int64_t i) -> Eigen::VectorXd {
    Eigen::VectorXd g = core->wd > 0.0
                            ? Eigen::VectorXd(core->wd * w)
                            : Eigen::VectorXd(Eigen::VectorXd::Zero(w.size()));
    int violator;
    const double m = core->row_margin(w, i, &violator);
    if (m > 0.0) {
      const auto xi = core->x.row(i);
      const int yi = core->y[static_cast<std::size_t>(i)];
      g.segment(violator * core->features, core->features) += xi;
      g.segment(yi * core->features, core->features) -= xi;
    }
    return g;
  };
  p.component_grad = comp;
  p.stochastic_grad = [comp, n](const Eigen::VectorXd& w,
                                Rng& rng) -> Eigen::VectorXd {
    return comp(w, rng.uniform_index(n));
  };
  p.full_grad = [comp, n](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
    for (std::int64_t i = 0; i < n; ++i) g += comp(w, i);
    return g / static_cast<double>(n);
  };

  if (weight_decay > 0.0) {
    const double radius = std::sqrt(2.0 / weight_decay);
    p.constants.R = radius;
    p.constants.mu = weight_decay;
    p.constants.G = 2.0 * max_row_norm + weight_decay * radius;
    const Eigen::VectorXd center = Eigen::VectorXd::Zero(p.dim);
    p.projection = [center, radius](const Eigen::VectorXd& w) {
      return project_ball(w, center, radius);
    };
  } else {
    p.constants.G = 2.0 * max_row_norm;
    p.projection = [](const Eigen::VectorXd& w) { return w; };
  }
  return p;
}

}  // namespace facopt
