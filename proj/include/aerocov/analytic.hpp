#pragma once

// Coverage upper bound by nested numerical quadrature.
//
// The bound counts, in expectation, the stations whose SIR clears their
// tier threshold (Campbell-Mecke), with the gamma fading CCDF replaced by its
// Alzer binomial bound so that every term reduces to a Laplace transform of
// the aggregate PPP interference.

#include <cstddef>

#include "aerocov/model.hpp"
#include "aerocov/quadrature.hpp"

namespace aerocov {

/// Hard limit on the serving-distance integral, in meters.
inline constexpr double kOuterIntegralCap = 1e6;

/// 2 pi lambda_j^s sum_n int y p_n(y) (1 - (1 + t P_j L_n(y) / M)^-M) dy for
/// the interferers of one tier and station kind.
double laplace_exponent(double t, std::size_t tier_index, StationKind kind,
                        const NetworkConfig& cfg);

/// E[exp(-t I)] of the total interference seen by the typical user.
double laplace_interference(double t, const NetworkConfig& cfg);

/// Alzer-bounded P{SIR >= beta_i} for a serving station of `kind` in tier
/// `tier_index` at ground distance x, clamped to [0, 1].
double conditional_sir_ccdf(double x, std::size_t tier_index, StationKind kind,
                            const NetworkConfig& cfg);

/// 2 pi lambda_i^s int x P{SIR_x >= beta_i} dx.
double coverage_bound_component(std::size_t tier_index, StationKind kind,
                                const NetworkConfig& cfg);

CoverageBound coverage_bound_total(const NetworkConfig& cfg);

}  // namespace aerocov
