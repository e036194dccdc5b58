#pragma once

// Parameter sweeps, curve tables, cross-checks and their CSV output.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aerocov/config_io.hpp"
#include "aerocov/montecarlo.hpp"

namespace aerocov {

struct ResultRow {
  std::string axis;
  double axis_value = 0.0;
  std::string environment;
  std::optional<double> bound_raw;
  std::optional<double> bound_clamped;
  std::optional<double> mc_p;
  std::optional<double> mc_ci;
  std::optional<std::size_t> mc_n;
  std::optional<double> analytic_secs;
  std::optional<double> mc_secs;
  /// Set when a mode failed at this point; the failed columns stay empty.
  std::optional<std::string> failure;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "axis,axis_value,environment,bound_raw,bound_clamped,mc_p,mc_ci,mc_n,analytic_secs,mc_secs";

/// Checks grid ordering and that every mutated configuration validates.
void validate_sweep(const NetworkConfig& cfg, const SweepSpec& spec);

/// Copy of `cfg` with the sweep axis of the target tier set to `value`.
NetworkConfig apply_axis(const NetworkConfig& cfg, const SweepSpec& spec, double value);

/// Evaluates every grid point (per environment, in grid order). Monte Carlo
/// at grid index g uses seed derive_seed(master_seed, g).
std::vector<ResultRow> run_sweep(const NetworkConfig& cfg, const SweepSpec& spec,
                                 unsigned threads = 0);

/// Up to 10 significant digits, '.' separator, locale independent.
std::string format_number(double value);

std::string csv_text(std::span<const ResultRow> rows);
void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(std::string_view text);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

enum class CurveKind { LosG2G, LosA2G, InterferenceCcdf };

CurveKind parse_curve_kind(std::string_view name);

struct CurveSpec {
  CurveKind kind = CurveKind::LosG2G;
  /// Distances (m) for LOS curves, power thresholds for the CCDF.
  std::vector<double> grid;
  std::size_t tier_index = 0;
  /// Extra series: one column per altitude (los_a2g) or aerial fraction
  /// (interference_ccdf). Empty means the configuration's value.
  std::vector<double> series;
  SimulationOptions simulation;
};

struct CurveTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CurveTable compute_curves(const NetworkConfig& cfg, const CurveSpec& spec);
std::string curve_csv_text(const CurveTable& table);
void curves_command(const NetworkConfig& cfg, const CurveSpec& spec,
                    const std::filesystem::path& path);

struct CheckResult {
  std::string name;
  double analytic = 0.0;
  double simulated = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Analytic-versus-simulation checks on one configuration: the coverage
/// bound, the Laplace transform at t in {0.1, 1, 10} / P, and the exact
/// M = 1 conditional coverage at x in {10, 50, 200} m.
std::vector<CheckResult> run_cross_checks(const NetworkConfig& cfg, const SimulationOptions& options);

}  // namespace aerocov
