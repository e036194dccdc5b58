// aerocov: coverage bound and Monte Carlo estimates from a JSON config.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure (every
// sweep point failed, or a cross-check failed), 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aerocov/analytic.hpp"
#include "aerocov/experiment.hpp"

namespace {

using namespace aerocov;

enum ExitCode { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct CommonArgs {
  std::string config;
  std::string mode = "both";
  std::optional<std::size_t> snapshots;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t tier = 0;
  bool verbatim = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "JSON configuration file")->required();
  cmd->add_option("--mode", args.mode, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  cmd->add_option("--snapshots", args.snapshots, "Monte Carlo snapshots");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--out", args.out, "output CSV path");
  cmd->add_option("--tier", args.tier, "tier index the command acts on");
  cmd->add_flag("--paper-verbatim", args.verbatim,
                "use the Laplace and Alzer arguments without the 1/M normalization");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--grid", "malformed number '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

ExperimentFile load(const CommonArgs& args) {
  ExperimentFile file = load_experiment(args.config);
  if (args.verbatim) file.network.verbatim_formulas = true;
  if (args.snapshots) file.simulation.snapshots = *args.snapshots;
  if (args.seed) file.simulation.seed = *args.seed;
  return file;
}

SweepModes modes_of(const std::string& mode) {
  return {mode != "mc", mode != "analytic"};
}

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + out + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + out + "'");
}

int run_eval(const CommonArgs& args) {
  const ExperimentFile file = load(args);
  const NetworkConfig& cfg = file.network;
  const SweepModes modes = modes_of(args.mode);
  ResultRow row;
  row.axis = "none";
  row.environment = std::string(to_string(cfg.environment.name));

  if (modes.analytic) {
    const CoverageBound bound = coverage_bound_total(cfg);
    row.bound_raw = bound.total_raw;
    row.bound_clamped = std::min(1.0, bound.total_raw);
    std::printf("bound_raw     %.6g\nbound         %.6g\n", bound.total_raw, bound.total);
    for (std::size_t i = 0; i < cfg.tiers.size(); ++i)
      for (StationKind kind : kStationKinds)
        std::printf("  tier %zu %-7s %.6g\n", i, std::string(to_string(kind)).c_str(),
                    bound.component(i, kind));
  }
  if (modes.montecarlo) {
    SimulationOptions options;
    options.n_snapshots = file.simulation.snapshots;
    options.rng.master_seed = file.simulation.seed;
    const CoverageEstimate est = estimate_coverage_mc(cfg, options);
    row.mc_p = est.p_hat;
    row.mc_ci = est.ci_halfwidth;
    row.mc_n = est.n_snapshots;
    std::printf("mc_p          %.6g +/- %.3g (n=%zu)\n", est.p_hat, est.ci_halfwidth, est.n_snapshots);
    for (std::size_t i = 0; i < cfg.tiers.size(); ++i)
      for (StationKind kind : kStationKinds)
        std::printf("  tier %zu %-7s %.6g\n", i, std::string(to_string(kind)).c_str(),
                    est.breakdown[slot_index(i, kind)]);
  }
  if (!args.out.empty()) emit_csv(std::vector{row}, args.out);
  return kOk;
}

int run_sweep_cmd(const CommonArgs& args, const std::string& axis, const std::string& grid,
                  const std::vector<std::string>& environments, bool timings) {
  const ExperimentFile file = load(args);
  SweepSpec spec = file.sweep.value_or(SweepSpec{});
  spec.density_unit = file.density_unit;
  spec.mc_snapshots = file.simulation.snapshots;
  spec.master_seed = file.simulation.seed;
  spec.record_timing = timings;
  if (!axis.empty()) spec.axis = parse_sweep_axis(axis);
  if (!grid.empty()) spec.grid = parse_grid(grid);
  if (!file.sweep || args.tier != 0) spec.tier_index = args.tier;
  if (!file.sweep || args.mode != "both") spec.modes = modes_of(args.mode);
  if (!environments.empty()) {
    spec.environments.clear();
    for (const auto& name : environments) spec.environments.push_back(environment_preset(name));
  }
  if (!file.sweep && axis.empty()) throw ConfigError("--sweep-axis", "required (or a sweep block in the config)");

  const auto rows = run_sweep(file.network, spec);
  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (!row.failure) continue;
    ++failed;
    std::fprintf(stderr, "%s=%s [%s]: %s\n", row.axis.c_str(), format_number(row.axis_value).c_str(),
                 row.environment.c_str(), row.failure->c_str());
  }
  write_or_print(args.out, csv_text(rows));
  return failed == rows.size() ? kNumerical : kOk;
}

int run_curves(const CommonArgs& args, const std::string& curve, const std::string& grid,
               const std::string& series) {
  const ExperimentFile file = load(args);
  CurveSpec spec;
  spec.kind = parse_curve_kind(curve);
  spec.grid = parse_grid(grid);
  spec.tier_index = args.tier;
  if (!series.empty()) spec.series = parse_grid(series);
  spec.simulation.n_snapshots = file.simulation.snapshots;
  spec.simulation.rng.master_seed = file.simulation.seed;
  write_or_print(args.out, curve_csv_text(compute_curves(file.network, spec)));
  return kOk;
}

int run_validate(const CommonArgs& args) {
  const ExperimentFile file = load(args);
  SimulationOptions options;
  options.n_snapshots = file.simulation.snapshots;
  options.rng.master_seed = file.simulation.seed;
  const auto checks = run_cross_checks(file.network, options);
  bool all = true;
  std::printf("%-22s %14s %14s %12s  %s\n", "check", "analytic", "simulated", "tolerance", "result");
  for (const auto& c : checks) {
    std::printf("%-22s %14.6g %14.6g %12.3g  %s\n", c.name.c_str(), c.analytic, c.simulated,
                c.tolerance, c.passed ? "PASS" : "FAIL");
    all = all && c.passed;
  }
  return all ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage of aerial-terrestrial heterogeneous cellular networks"};
  app.require_subcommand(1);

  CommonArgs eval_args, sweep_args, curve_args, validate_args;
  auto* eval = app.add_subcommand("eval", "bound and/or Monte Carlo estimate for one config");
  add_common(eval, eval_args);

  auto* sweep = app.add_subcommand("sweep", "sweep aerial_fraction, density or altitude");
  add_common(sweep, sweep_args);
  std::string sweep_axis, sweep_grid;
  std::vector<std::string> environments;
  bool timings = false;
  sweep->add_option("--sweep-axis", sweep_axis, "aerial_fraction, density or altitude");
  sweep->add_option("--sweep-grid", sweep_grid, "comma-separated ascending values");
  sweep->add_option("--environments", environments, "environment presets to sweep")->delimiter(',');
  sweep->add_flag("--timings", timings, "fill the wall-time columns");

  auto* curves = app.add_subcommand("curves", "LOS probability or interference CCDF curves");
  add_common(curves, curve_args);
  std::string curve_kind, curve_grid, curve_series;
  curves->add_option("--curve", curve_kind, "los_g2g, los_a2g or interference_ccdf")->required();
  curves->add_option("--grid", curve_grid, "comma-separated distances or thresholds")->required();
  curves->add_option("--series", curve_series, "altitudes (los_a2g) or aerial fractions (ccdf)");

  auto* validate = app.add_subcommand("validate", "analytic versus Monte Carlo cross-checks");
  add_common(validate, validate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*eval) return run_eval(eval_args);
    if (*sweep) return run_sweep_cmd(sweep_args, sweep_axis, sweep_grid, environments, timings);
    if (*curves) return run_curves(curve_args, curve_kind, curve_grid, curve_series);
    if (*validate) return run_validate(validate_args);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
