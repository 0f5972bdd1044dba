#pragma once

// Run traces and their CSV form. The schema is fixed:
//   step,grad_evals,f_gap,bound
// one header line, then numeric rows with '.' decimal separators, newline
// terminated. Doubles are written in the shortest decimal form that parses
// back to the same value, so a write/read round trip is exact; a missing
// bound is stored as nan.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace facopt {

struct TraceRow {
  std::int64_t step = 0;
  std::int64_t grad_evals = 0;
  double f_gap = 0.0;
  double bound = 0.0;  // nan when the run had no bound configured
};

struct Trace {
  std::vector<TraceRow> rows;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

void write_trace_csv(const Trace& trace, std::ostream& out);
std::string trace_to_csv(const Trace& trace);

// Strict parser for the schema above; throws std::runtime_error with the
// 1-based line number on any deviation.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv_file(const std::string& path);

}  // namespace facopt
