#include "facopt/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace facopt {

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::invalid_argument("nearest_rank_quantile: empty sample");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("nearest_rank_quantile: q must be in (0, 1]");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank == 0) {
    rank = 1;
  }
  return values[rank - 1];
}

Aggregate aggregate_traces(const std::vector<Trace>& traces) {
  if (traces.size() < 2) {
    throw std::invalid_argument("aggregate_traces: need at least 2 traces");
  }
  const std::size_t checkpoints = traces.front().rows.size();
  for (const Trace& trace : traces) {
    if (trace.rows.size() != checkpoints) {
      throw std::invalid_argument(
          "aggregate_traces: traces have mismatched checkpoint counts");
    }
    for (std::size_t i = 0; i < checkpoints; ++i) {
      if (trace.rows[i].step != traces.front().rows[i].step) {
        throw std::invalid_argument(
            "aggregate_traces: traces have mismatched step columns");
      }
    }
  }
  Aggregate aggregate;
  aggregate.rows.reserve(checkpoints);
  std::vector<double> sample(traces.size());
  for (std::size_t i = 0; i < checkpoints; ++i) {
    for (std::size_t t = 0; t < traces.size(); ++t) {
      sample[t] = traces[t].rows[i].f_gap;
    }
    AggregateRow row;
    row.step = traces.front().rows[i].step;
    row.median = nearest_rank_quantile(sample, 0.5);
    row.q25 = nearest_rank_quantile(sample, 0.25);
    row.q75 = nearest_rank_quantile(sample, 0.75);
    row.seeds = static_cast<std::int64_t>(traces.size());
    aggregate.rows.push_back(row);
  }
  return aggregate;
}

namespace {

constexpr const char* kHeader = "step,median,q25,q75,seeds";

}  // namespace

void write_aggregate_csv(const Aggregate& aggregate, std::ostream& out) {
  out << kHeader << "\n";
  for (const AggregateRow& row : aggregate.rows) {
    out << row.step << ',' << format_double(row.median) << ','
        << format_double(row.q25) << ',' << format_double(row.q75) << ','
        << row.seeds << "\n";
  }
}

Aggregate read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("aggregate csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kHeader) {
    throw std::runtime_error("aggregate csv: expected header '" +
                             std::string(kHeader) + "', got '" + line + "'");
  }
  Aggregate aggregate;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> parts;
    while (std::getline(fields, field, ',')) {
      parts.push_back(field);
    }
    if (parts.size() != 5) {
      throw std::runtime_error("aggregate csv line " +
                               std::to_string(line_no) + ": expected 5 fields");
    }
    try {
      AggregateRow row;
      row.step = std::stoll(parts[0]);
      row.median = std::stod(parts[1]);
      row.q25 = std::stod(parts[2]);
      row.q75 = std::stod(parts[3]);
      row.seeds = std::stoll(parts[4]);
      aggregate.rows.push_back(row);
    } catch (const std::exception&) {
      throw std::runtime_error("aggregate csv line " + std::to_string(line_no) +
                               ": malformed numeric field");
    }
  }
  return aggregate;
}

Aggregate read_aggregate_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open aggregate file '" + path + "'");
  }
  return read_aggregate_csv(in);
}

}  // namespace facopt
