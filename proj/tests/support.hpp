#pragma once

#include "aerocov/model.hpp"

namespace aerocov::testing {

/// Single tier, P = 1, beta = 5, alpha 2.4 / 4, D0 = 80, D1 = 164, H = 200,
/// density 5e-3 per square kilometer, Urban.
inline NetworkConfig reference_config(double aerial_fraction = 0.0) {
  NetworkConfig cfg;
  TierParams tier;
  tier.density = 5e-3 * kPerSquareKilometer;
  tier.aerial_fraction = aerial_fraction;
  cfg.tiers.push_back(tier);
  cfg.environment = environment_preset(EnvironmentPreset::Name::Urban);
  return cfg;
}

}  // namespace aerocov::testing
