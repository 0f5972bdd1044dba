#pragma once

// Self-check battery: re-runs the factorial-power and averaging identity
// suites over fixed grids and reports one row per identity with the worst
// observed error. The `bias` parameter adds a constant to the left side of
// the difference identity; it exists so tests can prove the battery actually
// detects a broken implementation (a 1e-6 bias must flip that row to FAIL).

#include <string>
#include <vector>

namespace facopt {

struct PropRow {
  std::string name;
  bool pass = false;
  double worst_err = 0.0;  // worst relative error, or worst ratio for the
                           // sandwich rows (pass while it stays below 1)
};

struct PropsReport {
  std::vector<PropRow> rows;
  bool all_pass() const;
};

PropsReport run_props(double bias = 0.0);

// Renders the report as an aligned text table, one identity per line plus a
// trailing summary line.
std::string format_props_report(const PropsReport& report);

}  // namespace facopt
