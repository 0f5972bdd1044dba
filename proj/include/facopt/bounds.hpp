#pragma once

// Closed-form convergence rate curves used as overlays and as acceptance
// checks. Each bound is identified by a stable string name so traces and
// configs can refer to it.

#include <cstdint>
#include <optional>
#include <string>

namespace facopt {

enum class BoundKind {
  nonsmooth_anytime,    // sqrt(2) R G (n+2)^(-1/2)
  strongly_convex,      // 2 G^2 / (mu (n+1))
  accelerated,          // 2 L D0^2 / n^(2), n >= 1
  svrg_convex,          // (gap0 + 9 L D0^2 / m0) / 2^S
  svrg_strongly_convex, // (3/5)^S (gap0 + (3/4) mu D0^2)
  dual_averaging,       // 2 R G (n+2)^(-1/2)
  sqrt_baseline,        // sqrt(2) R G / sqrt(n+1)
  recursive_baseline,   // R G (sqrt(2)/((1+sqrt(3))(n+1)) + 2/sqrt(n+1))
};

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundConstants {
  std::optional<double> G, L, mu, R, D0, gap0;
  std::optional<std::int64_t> m0;
};

struct BoundSpec {
  BoundKind kind;
  BoundConstants constants;
};

// Validates that every constant the kind needs is present; the error message
// lists the missing constants by name.
BoundSpec make_bound(BoundKind kind, const BoundConstants& constants);

// n counts steps for the per-step bounds and completed epochs for the
// variance-reduced ones. The accelerated curve is defined for n >= 1 and
// returns +infinity at n = 0.
double bound_value(const BoundSpec& spec, std::int64_t n);

}  // namespace facopt
