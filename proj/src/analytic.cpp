#include "aerocov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aerocov/channel.hpp"

namespace aerocov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double total_density(const NetworkConfig& cfg) {
  double sum = 0.0;
  for (const auto& tier : cfg.tiers) sum += tier.density;
  return sum;
}

// 1 - (1 + u)^-m without cancellation for small u.
double one_minus_power(double u, int m) {
  return -std::expm1(-static_cast<double>(m) * std::log1p(u));
}

double binomial(int n, int k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

const TierParams& tier_at(const NetworkConfig& cfg, std::size_t index) {
  if (index >= cfg.tiers.size()) throw std::out_of_range("tier index out of range");
  return cfg.tiers[index];
}

double kink_point(const TierParams& tier, StationKind kind) {
  return kind == StationKind::Ground ? tier.d0 : tier.altitude;
}

}  // namespace

double laplace_exponent(double t, std::size_t tier_index, StationKind kind,
                        const NetworkConfig& cfg) {
  if (t < 0.0) throw std::domain_error("laplace_exponent: t must be >= 0");
  const TierParams& tier = tier_at(cfg, tier_index);
  const double lambda = tier.thinned_density(kind);
  if (lambda == 0.0 || t == 0.0) return 0.0;
  if (std::isinf(t)) return std::numeric_limits<double>::infinity();

  const bool verbatim = cfg.verbatim_formulas;
  const auto integrand = [&](double y) {
    const LinkMix mix = link_mix(y, tier, kind, cfg.environment);
    double acc = 0.0;
    for (LinkKind link : kLinkKinds) {
      const double w = mix.weight(link);
      if (w == 0.0) continue;
      const int m = tier.fading.shape(kind, link);
      double u = t * tier.power * path_loss(y, tier, kind, link);
      if (!verbatim) u /= m;
      acc += w * one_minus_power(u, m);
    }
    return y * acc;
  };

  const double prefactor = kTwoPi * lambda;
  QuadOptions options;
  options.breakpoints = {kink_point(tier, kind)};
  const QuadResult r =
      integrate_semi_infinite(integrand, cfg.quad.inner_rel, cfg.quad.inner_abs / prefactor, options);
  return prefactor * std::max(r.value, 0.0);
}

double laplace_interference(double t, const NetworkConfig& cfg) {
  if (t < 0.0) throw std::domain_error("laplace_interference: t must be >= 0");
  if (t == 0.0) return 1.0;
  double exponent = 0.0;
  for (std::size_t j = 0; j < cfg.tiers.size(); ++j)
    for (StationKind kind : kStationKinds) exponent += laplace_exponent(t, j, kind, cfg);
  return std::exp(-exponent);
}

double conditional_sir_ccdf(double x, std::size_t tier_index, StationKind kind,
                            const NetworkConfig& cfg) {
  if (x < 0.0) throw std::domain_error("conditional_sir_ccdf: distance must be >= 0");
  const TierParams& tier = tier_at(cfg, tier_index);
  const LinkMix mix = link_mix(x, tier, kind, cfg.environment);

  KahanSum sum;
  for (LinkKind link : kLinkKinds) {
    const double w = mix.weight(link);
    if (w == 0.0) continue;
    const int m = tier.fading.shape(kind, link);
    const double nu = alzer_coeff(m);
    const double base =
        nu * tier.sir_threshold / (tier.power * path_loss(x, tier, kind, link)) *
        (cfg.verbatim_formulas ? m : 1);
    for (int l = 1; l <= m; ++l) {
      const double sign = (l % 2 == 1) ? 1.0 : -1.0;
      sum.add(w * sign * binomial(m, l) * laplace_interference(base * l, cfg));
    }
  }
  return std::clamp(sum.value(), 0.0, 1.0);
}

double coverage_bound_component(std::size_t tier_index, StationKind kind,
                                const NetworkConfig& cfg) {
  const TierParams& tier = tier_at(cfg, tier_index);
  const double lambda = tier.thinned_density(kind);
  if (lambda == 0.0) return 0.0;

  const auto integrand = [&](double x) {
    return x * conditional_sir_ccdf(x, tier_index, kind, cfg);
  };

  const double prefactor = kTwoPi * lambda;
  QuadOptions options;
  options.breakpoints = {kink_point(tier, kind)};
  options.upper = kOuterIntegralCap;
  const double density = total_density(cfg);
  if (density > 0.0) options.breakpoints.push_back(1.0 / std::sqrt(density));
  const QuadResult r =
      integrate_semi_infinite(integrand, cfg.quad.outer_rel, cfg.quad.outer_abs / prefactor, options);
  return prefactor * std::max(r.value, 0.0);
}

CoverageBound coverage_bound_total(const NetworkConfig& cfg) {
  CoverageBound bound;
  bound.components.assign(2 * cfg.tiers.size(), 0.0);
  for (std::size_t i = 0; i < cfg.tiers.size(); ++i)
    for (StationKind kind : kStationKinds)
      bound.components[slot_index(i, kind)] = coverage_bound_component(i, kind, cfg);
  for (double c : bound.components) bound.total_raw += c;
  bound.total = cfg.clamp_bound ? std::min(1.0, bound.total_raw) : bound.total_raw;
  return bound;
}

}  // namespace aerocov
