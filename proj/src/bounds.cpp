#include "facopt/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "facopt/facpow.hpp"

namespace facopt {

namespace {

struct KindInfo {
  BoundKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {BoundKind::nonsmooth_anytime, "nonsmooth-anytime"},
    {BoundKind::strongly_convex, "strongly-convex"},
    {BoundKind::accelerated, "accelerated"},
    {BoundKind::svrg_convex, "svrg-convex"},
    {BoundKind::svrg_strongly_convex, "svrg-strongly-convex"},
    {BoundKind::dual_averaging, "dual-averaging"},
    {BoundKind::sqrt_baseline, "sqrt-baseline"},
    {BoundKind::recursive_baseline, "recursive-baseline"},
};

void require(const BoundConstants& c, BoundKind kind,
             std::vector<std::string>& missing) {
  auto need_d = [&](const std::optional<double>& v, const char* name) {
    if (!v) missing.emplace_back(name);
  };
  switch (kind) {
    case BoundKind::nonsmooth_anytime:
    case BoundKind::dual_averaging:
    case BoundKind::sqrt_baseline:
    case BoundKind::recursive_baseline:
      need_d(c.G, "G");
      need_d(c.R, "R");
      break;
    case BoundKind::strongly_convex:
      need_d(c.G, "G");
      need_d(c.mu, "mu");
      break;
    case BoundKind::accelerated:
      need_d(c.L, "L");
      need_d(c.D0, "D0");
      break;
    case BoundKind::svrg_convex:
      need_d(c.gap0, "gap0");
      need_d(c.L, "L");
      need_d(c.D0, "D0");
      if (!c.m0) missing.emplace_back("m0");
      break;
    case BoundKind::svrg_strongly_convex:
      need_d(c.gap0, "gap0");
      need_d(c.mu, "mu");
      need_d(c.D0, "D0");
      break;
  }
}

}  // namespace

std::string to_string(BoundKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info.name;
  }
  throw std::logic_error("to_string: unknown bound kind");
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (const auto& info : kKinds) {
    if (name == info.name) return info.kind;
  }
  std::string known;
  for (const auto& info : kKinds) {
    if (!known.empty()) known += ", ";
    known += info.name;
  }
  throw std::invalid_argument("unknown bound '" + name + "' (known: " + known +
                              ")");
}

BoundSpec make_bound(BoundKind kind, const BoundConstants& constants) {
  std::vector<std::string> missing;
  require(constants, kind, missing);
  if (!missing.empty()) {
    std::string list;
    for (const auto& name : missing) {
      if (!list.empty()) list += ", ";
      list += name;
    }
    throw std::invalid_argument("bound '" + to_string(kind) +
                                "' is missing constants: " + list);
  }
  return {kind, constants};
}

double bound_value(const BoundSpec& spec, std::int64_t n) {
  if (n < 0) {
    throw std::invalid_argument("bound_value: n must be nonnegative");
  }
  const BoundConstants& c = spec.constants;
  switch (spec.kind) {
    case BoundKind::nonsmooth_anytime:
      return std::sqrt(2.0) * *c.R * *c.G * facpow(double(n + 2), -0.5);
    case BoundKind::strongly_convex:
      return 2.0 * *c.G * *c.G / (*c.mu * double(n + 1));
    case BoundKind::accelerated:
      if (n == 0) return std::numeric_limits<double>::infinity();
      return 2.0 * *c.L * *c.D0 * *c.D0 / facpow(double(n), 2.0);
    case BoundKind::svrg_convex:
      return (*c.gap0 + 9.0 * *c.L * *c.D0 * *c.D0 / double(*c.m0)) /
             std::pow(2.0, double(n));
    case BoundKind::svrg_strongly_convex:
      return std::pow(0.6, double(n)) *
             (*c.gap0 + 0.75 * *c.mu * *c.D0 * *c.D0);
    case BoundKind::dual_averaging:
      return 2.0 * *c.R * *c.G * facpow(double(n + 2), -0.5);
    case BoundKind::sqrt_baseline:
      return std::sqrt(2.0) * *c.R * *c.G / std::sqrt(double(n + 1));
    case BoundKind::recursive_baseline:
      return *c.R * *c.G *
             (std::sqrt(2.0) / ((1.0 + std::sqrt(3.0)) * double(n + 1)) +
              2.0 / std::sqrt(double(n + 1)));
  }
  throw std::logic_error("bound_value: unknown bound kind");
}

}  // namespace facopt
