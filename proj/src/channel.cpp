#include "aerocov/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aerocov {

namespace {

void require_domain(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

double g2g_path_loss(double d, double intercept, double alpha) {
  require_domain(d >= 0.0, "g2g_path_loss: distance must be >= 0");
  require_domain(intercept > 0.0 && alpha > 0.0, "g2g_path_loss: intercept and alpha must be > 0");
  return intercept * std::pow(1.0 + d, -alpha);
}

double a2g_path_loss(double d, double h, double intercept, double alpha) {
  require_domain(d >= 0.0, "a2g_path_loss: distance must be >= 0");
  require_domain(h > 0.0, "a2g_path_loss: altitude must be > 0");
  return g2g_path_loss(std::sqrt(d * d + h * h), intercept, alpha);
}

double los_prob_g2g(double d, double d0, double d1) {
  require_domain(d >= 0.0 && d0 > 0.0 && d1 > 0.0, "los_prob_g2g: invalid argument");
  if (d <= d0) return 1.0;
  const double decay = std::exp(-d / d1);
  return (d0 / d) * (1.0 - decay) + decay;
}

double los_prob_a2g(double d, double h, const EnvironmentPreset& env) {
  require_domain(d >= 0.0, "los_prob_a2g: distance must be >= 0");
  require_domain(h > 0.0, "los_prob_a2g: altitude must be > 0");
  const double theta = (180.0 / std::numbers::pi) * std::atan2(h, d);
  return 1.0 / (1.0 + env.a_env * std::exp(-env.b_env * (theta - env.a_env)));
}

LinkMix link_mix(double d, const TierParams& tier, StationKind kind,
                 const EnvironmentPreset& env) {
  const double p = kind == StationKind::Ground ? los_prob_g2g(d, tier.d0, tier.d1)
                                               : los_prob_a2g(d, tier.altitude, env);
  return {p, 1.0 - p};
}

double path_loss(double d, const TierParams& tier, StationKind kind, LinkKind link) {
  const double c = tier.intercept(kind, link);
  const double a = tier.alpha(link);
  return kind == StationKind::Ground ? g2g_path_loss(d, c, a)
                                     : a2g_path_loss(d, tier.altitude, c, a);
}

double alzer_coeff(int m) {
  require_domain(m >= 1, "alzer_coeff: shape must be >= 1");
  const double md = static_cast<double>(m);
  return md * std::exp(-std::lgamma(md + 1.0) / md);
}

}  // namespace aerocov
