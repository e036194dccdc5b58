#pragma once

// Path loss, LOS probability, fading and the Alzer coefficient. The analytic
// bound and the simulator both call these, so the two paths always agree on
// the channel model.

#include <random>

#include "aerocov/model.hpp"

namespace aerocov {

/// Mixture weights of the two link states at one distance.
struct LinkMix {
  double p_los = 1.0;
  double p_nlos = 0.0;

  double weight(LinkKind link) const noexcept { return link == LinkKind::Los ? p_los : p_nlos; }
};

/// intercept * (1 + d)^-alpha. Throws std::domain_error for d < 0.
double g2g_path_loss(double d, double intercept, double alpha);

/// intercept * (1 + sqrt(d^2 + h^2))^-alpha.
double a2g_path_loss(double d, double h, double intercept, double alpha);

/// Street-canyon LOS probability: min(d0/d, 1)(1 - e^{-d/d1}) + e^{-d/d1}.
/// Exactly 1 for d <= d0.
double los_prob_g2g(double d, double d0, double d1);

/// Elevation-angle sigmoid (1 + a exp(-b(theta - a)))^-1, theta in degrees.
double los_prob_a2g(double d, double h, const EnvironmentPreset& env);

LinkMix link_mix(double d, const TierParams& tier, StationKind kind,
                 const EnvironmentPreset& env);

/// Path loss of a station of `kind` in state `link` at ground distance d.
double path_loss(double d, const TierParams& tier, StationKind kind, LinkKind link);

/// m * (m!)^(-1/m) via lgamma.
double alzer_coeff(int m);

/// Normalized gamma fading: shape m, scale 1/m, mean 1.
template <class Rng>
double sample_fading(Rng& rng, int m) {
  if (m < 1) throw std::domain_error("sample_fading: shape must be >= 1");
  double h = 0.0;
  if (m == 1) {
    std::exponential_distribution<double> exponential(1.0);
    while (h <= 0.0) h = exponential(rng);
    return h;
  }
  std::gamma_distribution<double> gamma(static_cast<double>(m), 1.0 / m);
  while (h <= 0.0) h = gamma(rng);
  return h;
}

}  // namespace aerocov
