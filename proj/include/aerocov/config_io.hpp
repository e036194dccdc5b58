#pragma once

// Strict-schema JSON configuration files. Unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerocov/model.hpp"

namespace aerocov {

enum class DensityUnit { PerSquareKilometer, PerSquareMeter };

/// Factor converting a density in `unit` to stations per square meter.
double density_scale(DensityUnit unit) noexcept;

enum class SweepAxis { AerialFraction, Density, Altitude };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

struct SweepModes {
  bool analytic = true;
  bool montecarlo = true;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::AerialFraction;
  /// Axis values; densities are in `density_unit`.
  std::vector<double> grid;
  std::size_t tier_index = 0;
  SweepModes modes;
  std::size_t mc_snapshots = 40'000;
  std::uint64_t master_seed = 1;
  /// Environments to sweep; empty means the configuration's own.
  std::vector<EnvironmentPreset> environments;
  DensityUnit density_unit = DensityUnit::PerSquareKilometer;
  bool record_timing = false;
};

struct SimulationSettings {
  std::size_t snapshots = 40'000;
  std::uint64_t seed = 1;
};

/// Everything a configuration file may carry.
struct ExperimentFile {
  NetworkConfig network;
  DensityUnit density_unit = DensityUnit::PerSquareKilometer;
  SimulationSettings simulation;
  std::optional<SweepSpec> sweep;
};

/// Parses and validates JSON text. Throws ConfigError; parse errors report
/// line and column.
ExperimentFile parse_experiment(std::string_view json_text);
ExperimentFile load_experiment(const std::filesystem::path& path);

/// Network part of a configuration file, validated.
NetworkConfig load_config(const std::filesystem::path& path);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aerocov
