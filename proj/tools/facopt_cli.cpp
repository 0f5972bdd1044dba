// Command-line front end: seeded experiment execution, trace persistence,
// bound checking, ensemble aggregation, plot emission, and the identity
// self-check battery.
//
// Exit codes: 0 success or PASS, 1 check FAIL, 2 usage or configuration
// error, 3 runtime error.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "facopt/bounds.hpp"
#include "facopt/config.hpp"
#include "facopt/props.hpp"
#include "facopt/quantiles.hpp"
#include "facopt/runner.hpp"
#include "facopt/svg.hpp"
#include "facopt/trace.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void write_text_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing output file '" + path + "'");
  }
}

int cmd_props(double bias) {
  const facopt::PropsReport report = facopt::run_props(bias);
  std::cout << facopt::format_props_report(report);
  return report.all_pass() ? kExitPass : kExitFail;
}

int cmd_run(const std::string& config_path, std::optional<std::int64_t> seed,
            const std::string& out_path) {
  facopt::Config config = facopt::Config::parse_file(config_path);
  facopt::RunConfig rc = facopt::RunConfig::from_config(config);
  if (seed) {
    rc.seed = static_cast<std::uint64_t>(*seed);
  }
  const facopt::Trace trace = facopt::run(rc);
  write_text_output(out_path, facopt::trace_to_csv(trace));
  return kExitPass;
}

int cmd_bench(const std::string& config_path, int seeds, int jobs,
              const std::string& out_path) {
  facopt::Config config = facopt::Config::parse_file(config_path);
  const facopt::RunConfig rc = facopt::RunConfig::from_config(config);
  const facopt::Aggregate agg = facopt::bench(rc, seeds, jobs);
  std::ostringstream out;
  facopt::write_aggregate_csv(agg, out);
  write_text_output(out_path, out.str());
  return kExitPass;
}

int cmd_check(const std::string& trace_path, const std::string& bound_name,
              double slack) {
  // The name must be a known bound; the values come from the trace's own
  // bound column, written by the run that produced it.
  (void)facopt::bound_kind_from_string(bound_name);
  const facopt::Trace trace = facopt::read_trace_csv_file(trace_path);
  const facopt::CheckReport report = facopt::check_trace(trace, slack);
  std::printf("%s bound=%s slack=%g rows=%lld worst_ratio=%.6g at step %lld\n",
              report.pass ? "PASS" : "FAIL", bound_name.c_str(), slack,
              static_cast<long long>(report.rows_checked), report.worst_ratio,
              static_cast<long long>(report.worst_step));
  return report.pass ? kExitPass : kExitFail;
}

int cmd_plot(const std::string& in_path, const std::string& out_path,
             const std::string& title) {
  const facopt::Aggregate agg = facopt::read_aggregate_csv_file(in_path);
  const std::string svg = facopt::render_aggregate_svg(agg, title);
  if (!facopt::svg_well_formed(svg)) {
    throw std::runtime_error("emitted svg failed its own structural check");
  }
  write_text_output(out_path, svg);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorial-power optimization toolkit"};
  app.require_subcommand(1);

  double bias = 0.0;
  CLI::App* props = app.add_subcommand(
      "props", "run the identity self-check battery and print a table");
  props->add_option("--inject-bias", bias,
                    "perturb the difference identity (battery must FAIL)");

  std::string run_config;
  std::optional<std::int64_t> run_seed;
  std::string run_out = "-";
  CLI::App* run = app.add_subcommand(
      "run", "execute one configured run and emit its trace CSV");
  run->add_option("--config", run_config, "config file")->required();
  run->add_option("--seed", run_seed, "override the config's seed");
  run->add_option("--out", run_out, "output path ('-' for stdout)");

  std::string bench_config;
  int bench_seeds = 0;
  int bench_jobs = 1;
  std::string bench_out = "-";
  CLI::App* bench = app.add_subcommand(
      "bench", "run a seed ensemble and emit aggregate quantile CSV");
  bench->add_option("--config", bench_config, "config file")->required();
  bench->add_option("--seeds", bench_seeds, "number of seeds (>= 2)")
      ->required();
  bench->add_option("--jobs", bench_jobs, "worker threads");
  bench->add_option("--out", bench_out, "output path ('-' for stdout)");

  std::string check_trace_path;
  std::string check_bound;
  double check_slack = 1.0;
  CLI::App* check = app.add_subcommand(
      "check", "verify a trace against its recorded bound column");
  check->add_option("--trace", check_trace_path, "trace CSV file")->required();
  check->add_option("--bound", check_bound, "bound name")->required();
  check->add_option("--slack", check_slack, "multiplier on the bound (>= 1)");

  std::string plot_in;
  std::string plot_out;
  std::string plot_title = "gap vs step";
  CLI::App* plot = app.add_subcommand(
      "plot", "render an aggregate CSV as a self-contained SVG chart");
  plot->add_option("--in", plot_in, "aggregate CSV file")->required();
  plot->add_option("--out", plot_out, "output .svg path")->required();
  plot->add_option("--title", plot_title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (props->parsed()) {
      return cmd_props(bias);
    }
    if (run->parsed()) {
      return cmd_run(run_config, run_seed, run_out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_config, bench_seeds, bench_jobs, bench_out);
    }
    if (check->parsed()) {
      return cmd_check(check_trace_path, check_bound, check_slack);
    }
    return cmd_plot(plot_in, plot_out, plot_title);
  } catch (const facopt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
