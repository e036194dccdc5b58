#pragma once

// Snapshot simulator for the typical user at the origin.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aerocov/model.hpp"
#include "aerocov/random.hpp"

namespace aerocov {

struct SimulationOptions {
  std::size_t n_snapshots = 10'000;
  RngSpec rng;
  /// Overrides the resolved simulation radius (meters) when set.
  std::optional<double> radius;
  /// Worker count; 0 means default_thread_count().
  unsigned threads = 0;
};

/// AEROCOV_THREADS when set to a positive integer, else the hardware count.
unsigned default_thread_count();

/// max(30 / sqrt(sum lambda), 10 max d1, 10 max H), capped by an explicit
/// region_radius.
double resolve_radius(const NetworkConfig& cfg);

NetworkRealization sample_network(RandomStream& rng, const NetworkConfig& cfg, double radius);

/// LOS extension radii as multiples of the disk radius. Ground LOS
/// probability decays like d0/d, so its extension stays cheap; aerial LOS
/// probability levels off at a constant and is extended less.
inline constexpr double kGroundFarFieldFactor = 16.0;
inline constexpr double kAerialFarFieldFactor = 4.0;

/// Where stations are drawn for one estimate. Inside `radius` every station
/// is sampled; out to the per-kind LOS radius only LOS stations are sampled
/// (LOS and NLOS stations form independent thinned PPPs, so this is exact);
/// beyond that the mean received power is added as a constant.
struct SimulationRegion {
  double radius = 0.0;
  double ground_los_radius = 0.0;
  double aerial_los_radius = 0.0;
  double tail_interference = 0.0;

  double los_radius(StationKind kind) const noexcept {
    return kind == StationKind::Ground ? ground_los_radius : aerial_los_radius;
  }
};

/// Region for a disk of `radius`. Without cfg.far_field it is the plain disk.
SimulationRegion make_region(const NetworkConfig& cfg, double radius);

/// Appends the LOS stations of `kind` in the annulus inner < d <= outer.
void sample_far_los(RandomStream& rng, const NetworkConfig& cfg, StationKind kind, double inner,
                    double outer, NetworkRealization& net);

/// Mean received power from all stations outside the sampled part of `region`.
double far_field_interference(const NetworkConfig& cfg, const SimulationRegion& region);

NetworkRealization sample_region(RandomStream& rng, const NetworkConfig& cfg,
                                 const SimulationRegion& region);

/// P * L * h of one station at the origin.
double received_power(const Station& station, const NetworkConfig& cfg);

struct ServingStation {
  std::size_t tier = 0;
  StationKind kind = StationKind::Ground;
  double distance = 0.0;
};

struct SnapshotOutcome {
  bool covered = false;
  std::optional<ServingStation> serving;
  /// Largest SIR over all stations; +inf for a lone station, 0 when empty.
  double max_sir = 0.0;
};

/// Max-SIR association over an explicit station list. Each station's link
/// state and fading are used both as a candidate server and as interference.
/// `background` is extra interference seen by every station.
SnapshotOutcome evaluate_snapshot(std::span<const Station> stations, const NetworkConfig& cfg,
                                  double background = 0.0);

SnapshotOutcome snapshot_max_sir(RandomStream& rng, const NetworkConfig& cfg,
                                 const SimulationRegion& region);

/// Two-sided 95% Wilson score half-width for `successes` out of `n`.
double wilson_halfwidth(std::size_t successes, std::size_t n);

CoverageEstimate estimate_coverage_mc(const NetworkConfig& cfg, const SimulationOptions& options);

/// Fraction of snapshots whose total received power at the origin exceeds
/// each threshold. Thresholds must be ascending.
std::vector<double> estimate_interference_ccdf(const NetworkConfig& cfg,
                                               std::span<const double> thresholds,
                                               const SimulationOptions& options);

struct MeanEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t n = 0;
};

/// Sample mean of exp(-t I) with a normal 95% half-width.
MeanEstimate estimate_laplace_mc(double t, const NetworkConfig& cfg,
                                 const SimulationOptions& options);

/// P{S_x >= beta_i I} for a station of (tier, kind) placed at ground
/// distance x, with the remaining stations drawn from the PPP.
CoverageEstimate estimate_conditional_coverage_mc(const NetworkConfig& cfg, std::size_t tier_index,
                                                  StationKind kind, double x,
                                                  const SimulationOptions& options);

}  // namespace aerocov
