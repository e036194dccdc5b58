#pragma once

// Configuration and domain types shared by every part of the engine.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aerocov {

enum class StationKind { Ground, Aerial };
enum class LinkKind { Los, Nlos };

inline constexpr std::array<StationKind, 2> kStationKinds{StationKind::Ground, StationKind::Aerial};
inline constexpr std::array<LinkKind, 2> kLinkKinds{LinkKind::Los, LinkKind::Nlos};

std::string_view to_string(StationKind kind);
std::string_view to_string(LinkKind link);

/// Named building-density environment for the elevation-angle LOS model.
///
/// `a_env` is the sigmoid offset (in degrees of elevation) and `b_env` the
/// sigmoid slope. Custom environments keep a preset name but override the
/// numbers.
struct EnvironmentPreset {
  enum class Name { HighRise, DenseUrban, Urban, SubUrban };

  Name name = Name::Urban;
  double a_env = 9.61;
  double b_env = 0.16;
};

inline constexpr std::array<EnvironmentPreset::Name, 4> kEnvironmentNames{
    EnvironmentPreset::Name::HighRise, EnvironmentPreset::Name::DenseUrban,
    EnvironmentPreset::Name::Urban, EnvironmentPreset::Name::SubUrban};

std::string_view to_string(EnvironmentPreset::Name name);

/// Looks up a preset by its canonical name ("HighRise", "DenseUrban",
/// "Urban", "SubUrban"). Throws ConfigError listing the valid names otherwise.
EnvironmentPreset environment_preset(std::string_view name);
EnvironmentPreset environment_preset(EnvironmentPreset::Name name);

/// Integer gamma shapes of the normalized (unit-mean) fading per station
/// kind and link state.
struct FadingShapes {
  int m_los_ground = 3;
  int m_nlos_ground = 1;
  int m_los_aerial = 3;
  int m_nlos_aerial = 1;

  int shape(StationKind kind, LinkKind link) const noexcept {
    if (kind == StationKind::Ground) return link == LinkKind::Los ? m_los_ground : m_nlos_ground;
    return link == LinkKind::Los ? m_los_aerial : m_nlos_aerial;
  }
};

/// One tier of base stations. Distances in meters, density per square meter.
struct TierParams {
  double density = 0.0;
  double power = 1.0;
  double sir_threshold = 5.0;
  double aerial_fraction = 0.0;
  double altitude = 200.0;
  double d0 = 80.0;
  double d1 = 164.0;
  double alpha_los = 2.4;
  double alpha_nlos = 4.0;
  double intercept_los_ground = 1.0;
  double intercept_nlos_ground = 1.0;
  double intercept_los_aerial = 1.0;
  double intercept_nlos_aerial = 1.0;
  FadingShapes fading;

  /// Density of the ground or aerial subset after independent thinning.
  double thinned_density(StationKind kind) const noexcept {
    return kind == StationKind::Aerial ? aerial_fraction * density
                                       : (1.0 - aerial_fraction) * density;
  }

  double intercept(StationKind kind, LinkKind link) const noexcept;
  double alpha(LinkKind link) const noexcept {
    return link == LinkKind::Los ? alpha_los : alpha_nlos;
  }
};

inline constexpr double kPerSquareKilometer = 1e-6;  // stations/km^2 -> stations/m^2

struct QuadratureTolerances {
  double inner_rel = 1e-6;
  double inner_abs = 1e-9;
  double outer_rel = 1e-4;
  double outer_abs = 1e-6;
};

struct NetworkConfig {
  std::vector<TierParams> tiers;
  EnvironmentPreset environment;
  /// Simulation disk radius in meters; nullopt selects the automatic rule.
  std::optional<double> region_radius;
  QuadratureTolerances quad;
  /// Evaluate the Laplace factor as (1 + sPL)^-M and scale the Alzer
  /// argument by an extra M, i.e. the formulas exactly as printed.
  bool verbatim_formulas = false;
  bool clamp_bound = true;
  /// Extend the simulation beyond the disk: LOS stations out to a wider
  /// radius, plus the mean interference of everything farther away.
  bool far_field = true;
};

/// One violated constraint: a dotted field path plus the constraint text.
struct ConfigIssue {
  std::string path;
  std::string constraint;

  bool operator==(const ConfigIssue&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  ConfigError(std::string path, std::string constraint);
  explicit ConfigError(const std::string& message);

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Returns every invariant violation in `cfg`; empty means valid.
std::vector<ConfigIssue> config_issues(const NetworkConfig& cfg);

/// Returns `cfg` unchanged when valid, otherwise throws ConfigError carrying
/// the complete list of violations.
NetworkConfig validate_config(NetworkConfig cfg);

/// A single base station of one sampled snapshot.
struct Station {
  double x = 0.0;
  double y = 0.0;
  std::size_t tier = 0;
  StationKind kind = StationKind::Ground;
  LinkKind link = LinkKind::Nlos;
  double fading = 1.0;

  double ground_distance() const noexcept;
};

struct NetworkRealization {
  double radius = 0.0;
  std::vector<Station> stations;
};

/// Per (tier, kind) slot index used by estimates and bounds.
inline std::size_t slot_index(std::size_t tier, StationKind kind) noexcept {
  return 2 * tier + (kind == StationKind::Aerial ? 1 : 0);
}

struct CoverageEstimate {
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n_snapshots = 0;
  /// Association frequency per slot_index(tier, kind).
  std::vector<double> breakdown;
};

struct CoverageBound {
  /// Upper-bound component per slot_index(tier, kind).
  std::vector<double> components;
  double total_raw = 0.0;
  double total = 0.0;

  double component(std::size_t tier, StationKind kind) const {
    return components.at(slot_index(tier, kind));
  }
};

}  // namespace aerocov
