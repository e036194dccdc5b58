#include "aerocov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "aerocov/channel.hpp"
#include "aerocov/quadrature.hpp"

namespace aerocov {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Runs work(k) for k in [0, n) on `threads` workers and stores the results by
// index, so the outcome never depends on scheduling.
template <class Result, class Work>
std::vector<Result> run_indexed(std::size_t n, unsigned threads, Work&& work) {
  std::vector<Result> results(n);
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    for (std::size_t k = 0; k < n; ++k) results[k] = work(k);
    return results;
  }

  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        try {
          for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n || failed.load()) return;
            const std::size_t end = std::min(n, begin + kChunk);
            for (std::size_t k = begin; k < end; ++k) results[k] = work(k);
          }
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

double total_received_power(const NetworkRealization& net, const NetworkConfig& cfg) {
  double total = 0.0;
  for (const Station& s : net.stations) total += received_power(s, cfg);
  return total;
}

void require_snapshots(const SimulationOptions& options) {
  if (options.n_snapshots == 0) throw std::invalid_argument("n_snapshots must be >= 1");
}

SimulationRegion region_for(const NetworkConfig& cfg, const SimulationOptions& options) {
  if (options.radius && !(*options.radius > 0.0))
    throw std::invalid_argument("simulation radius must be > 0");
  return make_region(cfg, options.radius.value_or(resolve_radius(cfg)));
}

Station make_station(RandomStream& rng, const TierParams& tier, std::size_t index, double r,
                     StationKind kind, LinkKind link) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  // Uniform direction by rejection from the square, avoiding sin/cos.
  double u = 0.0;
  double v = 0.0;
  double norm2 = 0.0;
  do {
    u = unit(rng);
    v = unit(rng);
    norm2 = u * u + v * v;
  } while (norm2 > 1.0 || norm2 == 0.0);
  const double scale = r / std::sqrt(norm2);
  Station s;
  s.tier = index;
  s.x = u * scale;
  s.y = v * scale;
  s.kind = kind;
  s.link = link;
  s.fading = sample_fading(rng, tier.fading.shape(kind, link));
  return s;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("AEROCOV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double resolve_radius(const NetworkConfig& cfg) {
  double density = 0.0;
  double radius = 0.0;
  for (const auto& tier : cfg.tiers) {
    density += tier.density;
    radius = std::max({radius, 10.0 * tier.d1, 10.0 * tier.altitude});
  }
  if (density > 0.0) radius = std::max(radius, 30.0 / std::sqrt(density));
  if (cfg.region_radius) radius = std::min(radius, *cfg.region_radius);
  return radius;
}

NetworkRealization sample_network(RandomStream& rng, const NetworkConfig& cfg, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_network: radius must be > 0");
  NetworkRealization net;
  net.radius = radius;
  const double area = std::numbers::pi * radius * radius;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t i = 0; i < cfg.tiers.size(); ++i) {
    const TierParams& tier = cfg.tiers[i];
    const double mean = tier.density * area;
    if (mean <= 0.0) continue;
    const auto count = std::poisson_distribution<std::size_t>(mean)(rng);
    net.stations.reserve(net.stations.size() + count);
    for (std::size_t k = 0; k < count; ++k) {
      const double r = radius * std::sqrt(unit(rng));
      const StationKind kind =
          unit(rng) < tier.aerial_fraction ? StationKind::Aerial : StationKind::Ground;
      const LinkMix mix = link_mix(r, tier, kind, cfg.environment);
      const LinkKind link = unit(rng) < mix.p_los ? LinkKind::Los : LinkKind::Nlos;
      net.stations.push_back(make_station(rng, tier, i, r, kind, link));
    }
  }
  return net;
}

void sample_far_los(RandomStream& rng, const NetworkConfig& cfg, StationKind kind, double inner,
                    double outer, NetworkRealization& net) {
  if (!(inner > 0.0) || !(outer >= inner))
    throw std::invalid_argument("sample_far_los: need 0 < inner <= outer");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < cfg.tiers.size(); ++i) {
    const TierParams& tier = cfg.tiers[i];
    const double density = tier.thinned_density(kind);
    if (density <= 0.0) continue;
    // LOS probability is nonincreasing in distance, so within each ring
    // [a, 2a) its value at a bounds it and rejection sampling is exact.
    for (double a = inner; a < outer; a *= 2.0) {
      const double b = std::min(2.0 * a, outer);
      const double envelope = link_mix(a, tier, kind, cfg.environment).p_los;
      const double mean = density * envelope * std::numbers::pi * (b * b - a * a);
      if (mean <= 0.0) continue;
      const auto count = std::poisson_distribution<std::size_t>(mean)(rng);
      for (std::size_t k = 0; k < count; ++k) {
        const double r = std::sqrt(a * a + unit(rng) * (b * b - a * a));
        const double p = link_mix(r, tier, kind, cfg.environment).p_los;
        if (unit(rng) * envelope >= p) continue;
        net.stations.push_back(make_station(rng, tier, i, r, kind, LinkKind::Los));
      }
    }
  }
}

double far_field_interference(const NetworkConfig& cfg, const SimulationRegion& region) {
  double total = 0.0;
  for (const TierParams& tier : cfg.tiers) {
    for (StationKind kind : kStationKinds) {
      const double density = tier.thinned_density(kind);
      if (density <= 0.0) continue;
      for (LinkKind link : kLinkKinds) {
        const double from = link == LinkKind::Los ? region.los_radius(kind) : region.radius;
        const auto integrand = [&](double z) {
          const double y = from + z;
          return y * link_mix(y, tier, kind, cfg.environment).weight(link) *
                 path_loss(y, tier, kind, link);
        };
        QuadOptions options;
        options.scale = from;
        const QuadResult r = integrate_semi_infinite(integrand, 1e-8, 1e-300, options);
        total += 2.0 * std::numbers::pi * density * tier.power * r.value;
      }
    }
  }
  return total;
}

SimulationRegion make_region(const NetworkConfig& cfg, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("simulation radius must be > 0");
  SimulationRegion region{radius, radius, radius, 0.0};
  if (!cfg.far_field) return region;
  region.ground_los_radius = kGroundFarFieldFactor * radius;
  region.aerial_los_radius = kAerialFarFieldFactor * radius;
  region.tail_interference = far_field_interference(cfg, region);
  return region;
}

NetworkRealization sample_region(RandomStream& rng, const NetworkConfig& cfg,
                                 const SimulationRegion& region) {
  NetworkRealization net = sample_network(rng, cfg, region.radius);
  for (StationKind kind : kStationKinds)
    if (region.los_radius(kind) > region.radius)
      sample_far_los(rng, cfg, kind, region.radius, region.los_radius(kind), net);
  return net;
}

double received_power(const Station& station, const NetworkConfig& cfg) {
  const TierParams& tier = cfg.tiers.at(station.tier);
  return tier.power *
         path_loss(station.ground_distance(), tier, station.kind, station.link) * station.fading;
}

SnapshotOutcome evaluate_snapshot(std::span<const Station> stations, const NetworkConfig& cfg,
                                  double background) {
  SnapshotOutcome out;
  if (stations.empty()) return out;

  std::vector<double> power(stations.size());
  double total = background;
  std::size_t strongest = 0;
  for (std::size_t k = 0; k < stations.size(); ++k) {
    power[k] = received_power(stations[k], cfg);
    total += power[k];
    if (power[k] > power[strongest]) strongest = k;
  }
  // Direct sum for the strongest station. For every other station
  // total - power[k] >= total / 2.
  double strongest_interference = background;
  for (std::size_t k = 0; k < stations.size(); ++k)
    if (k != strongest) strongest_interference += power[k];

  const auto sir_of = [&](std::size_t k) {
    const double interference = k == strongest ? strongest_interference : total - power[k];
    if (interference <= 0.0) return std::numeric_limits<double>::infinity();
    return power[k] / interference;
  };

  out.max_sir = sir_of(strongest);
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < stations.size(); ++k) {
    const double beta = cfg.tiers.at(stations[k].tier).sir_threshold;
    if (sir_of(k) >= beta && (!best || power[k] > power[*best])) best = k;
  }
  if (best) {
    const Station& s = stations[*best];
    out.covered = true;
    out.serving = ServingStation{s.tier, s.kind, s.ground_distance()};
  }
  return out;
}

SnapshotOutcome snapshot_max_sir(RandomStream& rng, const NetworkConfig& cfg,
                                 const SimulationRegion& region) {
  const NetworkRealization net = sample_region(rng, cfg, region);
  return evaluate_snapshot(net.stations, cfg, region.tail_interference);
}

double wilson_halfwidth(std::size_t successes, std::size_t n) {
  if (n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = kZ95 * kZ95;
  return kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

CoverageEstimate estimate_coverage_mc(const NetworkConfig& cfg, const SimulationOptions& options) {
  require_snapshots(options);
  const SimulationRegion region = region_for(cfg, options);
  // -1: not covered; otherwise the serving slot index.
  const auto slots = run_indexed<int>(options.n_snapshots, options.threads, [&](std::size_t k) {
    RandomStream rng = substream(options.rng, k);
    const SnapshotOutcome o = snapshot_max_sir(rng, cfg, region);
    return o.serving ? static_cast<int>(slot_index(o.serving->tier, o.serving->kind)) : -1;
  });

  CoverageEstimate est;
  est.n_snapshots = options.n_snapshots;
  std::vector<std::size_t> counts(2 * cfg.tiers.size(), 0);
  std::size_t covered = 0;
  for (int slot : slots) {
    if (slot < 0) continue;
    ++covered;
    ++counts[static_cast<std::size_t>(slot)];
  }
  const double n = static_cast<double>(options.n_snapshots);
  est.p_hat = covered / n;
  est.ci_halfwidth = wilson_halfwidth(covered, options.n_snapshots);
  est.breakdown.reserve(counts.size());
  for (std::size_t c : counts) est.breakdown.push_back(c / n);
  return est;
}

std::vector<double> estimate_interference_ccdf(const NetworkConfig& cfg,
                                               std::span<const double> thresholds,
                                               const SimulationOptions& options) {
  require_snapshots(options);
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw std::invalid_argument("estimate_interference_ccdf: thresholds must be ascending");
  const SimulationRegion region = region_for(cfg, options);
  const auto totals = run_indexed<double>(options.n_snapshots, options.threads, [&](std::size_t k) {
    RandomStream rng = substream(options.rng, k);
    return region.tail_interference + total_received_power(sample_region(rng, cfg, region), cfg);
  });

  std::vector<double> ccdf;
  ccdf.reserve(thresholds.size());
  for (double tau : thresholds) {
    const auto above = std::count_if(totals.begin(), totals.end(), [tau](double v) { return v > tau; });
    ccdf.push_back(static_cast<double>(above) / static_cast<double>(totals.size()));
  }
  return ccdf;
}

MeanEstimate estimate_laplace_mc(double t, const NetworkConfig& cfg,
                                 const SimulationOptions& options) {
  require_snapshots(options);
  if (t < 0.0) throw std::domain_error("estimate_laplace_mc: t must be >= 0");
  if (t == 0.0) return {1.0, 0.0, options.n_snapshots};
  const SimulationRegion region = region_for(cfg, options);
  const auto samples = run_indexed<double>(options.n_snapshots, options.threads, [&](std::size_t k) {
    RandomStream rng = substream(options.rng, k);
    const double interference =
        region.tail_interference + total_received_power(sample_region(rng, cfg, region), cfg);
    return std::exp(-t * interference);
  });

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, kZ95 * sd / std::sqrt(n), samples.size()};
}

CoverageEstimate estimate_conditional_coverage_mc(const NetworkConfig& cfg, std::size_t tier_index,
                                                  StationKind kind, double x,
                                                  const SimulationOptions& options) {
  require_snapshots(options);
  if (x < 0.0) throw std::domain_error("estimate_conditional_coverage_mc: distance must be >= 0");
  const TierParams& tier = cfg.tiers.at(tier_index);
  const SimulationRegion region = region_for(cfg, options);

  const auto hits = run_indexed<char>(options.n_snapshots, options.threads, [&](std::size_t k) {
    RandomStream rng = substream(options.rng, k);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Station serving;
    serving.tier = tier_index;
    serving.kind = kind;
    serving.x = x;
    const LinkMix mix = link_mix(x, tier, kind, cfg.environment);
    serving.link = unit(rng) < mix.p_los ? LinkKind::Los : LinkKind::Nlos;
    serving.fading = sample_fading(rng, tier.fading.shape(kind, serving.link));
    const double signal = received_power(serving, cfg);
    const double interference =
        region.tail_interference + total_received_power(sample_region(rng, cfg, region), cfg);
    return static_cast<char>(signal >= tier.sir_threshold * interference);
  });

  const auto covered = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), char{1}));
  CoverageEstimate est;
  est.n_snapshots = options.n_snapshots;
  est.p_hat = static_cast<double>(covered) / static_cast<double>(options.n_snapshots);
  est.ci_halfwidth = wilson_halfwidth(covered, options.n_snapshots);
  est.breakdown.assign(2 * cfg.tiers.size(), 0.0);
  est.breakdown[slot_index(tier_index, kind)] = est.p_hat;
  return est;
}

}  // namespace aerocov
