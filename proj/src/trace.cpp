#include "facopt/trace.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace facopt {

namespace {

constexpr const char* kHeader = "step,grad_evals,f_gap,bound";

[[noreturn]] void fail_at(std::int64_t line, const std::string& what) {
  throw std::runtime_error("trace csv line " + std::to_string(line) + ": " +
                           what);
}

double parse_double_field(const std::string& raw, std::int64_t line,
                          const char* field) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != raw.size() || raw.empty()) {
    fail_at(line, std::string(field) + " field '" + raw + "' is not a number");
  }
  return parsed;
}

std::int64_t parse_int_field(const std::string& raw, std::int64_t line,
                             const char* field) {
  std::size_t used = 0;
  std::int64_t parsed = 0;
  try {
    parsed = std::stoll(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != raw.size() || raw.empty()) {
    fail_at(line,
            std::string(field) + " field '" + raw + "' is not an integer");
  }
  return parsed;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  char buffer[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) {
      return buffer;
    }
  }
  return buffer;  // %.17g always round trips
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << kHeader << "\n";
  for (const TraceRow& row : trace.rows) {
    out << row.step << ',' << row.grad_evals << ',' << format_double(row.f_gap)
        << ',' << format_double(row.bound) << "\n";
  }
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(trace, out);
  return out.str();
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace csv: empty input");
  }
  ++line_no;
  if (line == std::string(kHeader) + "\r") {
    line.pop_back();
  }
  if (line != kHeader) {
    fail_at(line_no, "expected header '" + std::string(kHeader) + "', got '" +
                         line + "'");
  }
  Trace trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 4) {
      fail_at(line_no, "expected 4 fields, got " +
                           std::to_string(fields.size()));
    }
    TraceRow row;
    row.step = parse_int_field(fields[0], line_no, "step");
    row.grad_evals = parse_int_field(fields[1], line_no, "grad_evals");
    row.f_gap = parse_double_field(fields[2], line_no, "f_gap");
    row.bound = parse_double_field(fields[3], line_no, "bound");
    if (!trace.rows.empty()) {
      if (row.step <= trace.rows.back().step) {
        fail_at(line_no, "steps must be strictly increasing");
      }
      if (row.grad_evals < trace.rows.back().grad_evals) {
        fail_at(line_no, "grad_evals must be nondecreasing");
      }
    }
    trace.rows.push_back(row);
  }
  return trace;
}

Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file '" + path + "'");
  }
  return read_trace_csv(in);
}

}  // namespace facopt
