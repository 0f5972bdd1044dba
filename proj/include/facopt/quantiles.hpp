#pragma once

// Ensemble aggregation with nearest-rank quantiles: for n sorted values the
// q-quantile is the value at rank ceil(q * n) (1-based), so every reported
// number is an actual observation and reproduces exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "facopt/trace.hpp"

namespace facopt {

// Requires a nonempty sample and q in (0, 1].
double nearest_rank_quantile(std::vector<double> values, double q);

struct AggregateRow {
  std::int64_t step = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::int64_t seeds = 0;
};

struct Aggregate {
  std::vector<AggregateRow> rows;
};

// Per-checkpoint quantiles of f_gap across traces. All traces must share the
// same step column (they come from one bench config).
Aggregate aggregate_traces(const std::vector<Trace>& traces);

// Schema: header "step,median,q25,q75,seeds" then numeric rows, same number
// formatting rules as traces.
void write_aggregate_csv(const Aggregate& aggregate, std::ostream& out);
Aggregate read_aggregate_csv(std::istream& in);
Aggregate read_aggregate_csv_file(const std::string& path);

}  // namespace facopt
