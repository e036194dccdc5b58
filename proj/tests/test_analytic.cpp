#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "aerocov/analytic.hpp"
#include "aerocov/channel.hpp"
#include "support.hpp"

using namespace aerocov;
using doctest::Approx;

namespace {

// Composite Simpson in u = log(y), split at the kink. Independent of the
// adaptive integrator under test.
double simpson_log(const auto& f, double kink, double lo = 1e-8, double hi = 1e40) {
  const auto piece = [&](double a, double b) {
    const int n = 60000;
    const double ua = std::log(a);
    const double h = (std::log(b) - ua) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double y = std::exp(ua + i * h);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * f(y) * y;
    }
    return sum * h / 3.0;
  };
  return piece(lo, kink) + piece(kink, hi);
}

double oracle_exponent(double t, const TierParams& tier, StationKind kind, const EnvironmentPreset& env,
                       bool verbatim) {
  const auto f = [&](double y) {
    double p_los = 0.0;
    double loss_los = 0.0;
    double loss_nlos = 0.0;
    if (kind == StationKind::Ground) {
      p_los = y <= tier.d0 ? 1.0 : (tier.d0 / y) * (1 - std::exp(-y / tier.d1)) + std::exp(-y / tier.d1);
      loss_los = std::pow(1 + y, -tier.alpha_los);
      loss_nlos = std::pow(1 + y, -tier.alpha_nlos);
    } else {
      const double theta = std::atan(tier.altitude / y) * 180 / std::numbers::pi;
      p_los = 1 / (1 + env.a_env * std::exp(-env.b_env * (theta - env.a_env)));
      const double slant = std::sqrt(y * y + tier.altitude * tier.altitude);
      loss_los = std::pow(1 + slant, -tier.alpha_los);
      loss_nlos = std::pow(1 + slant, -tier.alpha_nlos);
    }
    const int ml = tier.fading.shape(kind, LinkKind::Los);
    const int mn = tier.fading.shape(kind, LinkKind::Nlos);
    const double dl = verbatim ? 1.0 : ml;
    const double dn = verbatim ? 1.0 : mn;
    // 1 - (1 + u)^-m, written to survive u far below machine epsilon.
    const auto hit = [](double u, int m) { return -std::expm1(-m * std::log1p(u)); };
    return y * (p_los * hit(t * tier.power * loss_los / dl, ml) +
                (1 - p_los) * hit(t * tier.power * loss_nlos / dn, mn));
  };
  const double kink = kind == StationKind::Ground ? tier.d0 : tier.altitude;
  return 2 * std::numbers::pi * tier.thinned_density(kind) * simpson_log(f, kink);
}

NetworkConfig zero_density() {
  auto cfg = testing::reference_config(0.5);
  cfg.tiers[0].density = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("Laplace exponent trivial cases") {
  const auto cfg = testing::reference_config(0.5);
  CHECK(laplace_exponent(0.0, 0, StationKind::Ground, cfg) == 0.0);
  CHECK(laplace_exponent(0.0, 0, StationKind::Aerial, cfg) == 0.0);
  CHECK(laplace_exponent(1e12, 0, StationKind::Ground, zero_density()) == 0.0);
  CHECK(laplace_interference(0.0, cfg) == 1.0);
  for (double t : {1.0, 1e8, 1e16}) CHECK(laplace_interference(t, zero_density()) == 1.0);
  CHECK_THROWS_AS(laplace_exponent(-1.0, 0, StationKind::Ground, cfg), std::domain_error);
  CHECK_THROWS_AS(laplace_exponent(1.0, 3, StationKind::Ground, cfg), std::out_of_range);
}

TEST_CASE("Laplace exponent matches an independent quadrature") {
  for (bool verbatim : {false, true}) {
    for (double q : {0.3}) {
      auto cfg = testing::reference_config(q);
      cfg.verbatim_formulas = verbatim;
      for (StationKind kind : kStationKinds) {
        for (double t : {1e6, 1e10, 1e14}) {
          CAPTURE(verbatim);
          CAPTURE(t);
          CAPTURE(to_string(kind));
          const double expected = oracle_exponent(t, cfg.tiers[0], kind, cfg.environment, verbatim);
          CHECK(laplace_exponent(t, 0, kind, cfg) == Approx(expected).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("Laplace transform is strictly decreasing in t") {
  const auto cfg = testing::reference_config(0.5);
  double prev_value = 1.0;
  double prev_exponent = 0.0;
  for (double t = 1e4; t < 1e20; t *= 4.0) {
    const double exponent = laplace_exponent(t, 0, StationKind::Aerial, cfg) +
                            laplace_exponent(t, 0, StationKind::Ground, cfg);
    CHECK(exponent > prev_exponent);
    prev_exponent = exponent;
    const double value = laplace_interference(t, cfg);
    if (value > 0.0) {
      CHECK(value < prev_value);
      prev_value = value;
    }
  }
}

TEST_CASE("Laplace exponent is additive across tiers") {
  auto one = testing::reference_config(0.4);
  auto two = one;
  TierParams second = one.tiers[0];
  second.density *= 3.0;
  second.power = 0.25;
  second.altitude = 80.0;
  second.aerial_fraction = 0.7;
  two.tiers.push_back(second);
  auto only_second = one;
  only_second.tiers = {second};

  for (double t : {1e9, 1e13}) {
    double combined = 0.0;
    double separate = 0.0;
    for (StationKind kind : kStationKinds) {
      combined += laplace_exponent(t, 0, kind, two) + laplace_exponent(t, 1, kind, two);
      separate += laplace_exponent(t, 0, kind, one) + laplace_exponent(t, 0, kind, only_second);
    }
    CHECK(combined == Approx(separate).epsilon(1e-12));
    CHECK(-std::log(laplace_interference(t, two)) == Approx(separate).epsilon(1e-12));
  }
}

TEST_CASE("conditional coverage limits") {
  auto cfg = zero_density();
  for (double x : {0.0, 10.0, 500.0, 1e5}) {
    CHECK(conditional_sir_ccdf(x, 0, StationKind::Ground, cfg) == Approx(1.0).epsilon(1e-12));
    CHECK(conditional_sir_ccdf(x, 0, StationKind::Aerial, cfg) == Approx(1.0).epsilon(1e-12));
  }
  // At 5e-3 per square kilometer an SIR of 1e8 is still reachable near a
  // station, so the limit is checked on a dense network.
  auto huge_beta = testing::reference_config(0.5);
  huge_beta.tiers[0].density = 5e-3;
  huge_beta.tiers[0].sir_threshold = 1e8;
  for (double x : {10.0, 200.0, 5000.0})
    for (StationKind kind : kStationKinds) CHECK(conditional_sir_ccdf(x, 0, kind, huge_beta) < 1e-3);
  CHECK_THROWS_AS(conditional_sir_ccdf(-1.0, 0, StationKind::Ground, huge_beta), std::domain_error);
}

TEST_CASE("conditional coverage is nonincreasing in beta") {
  auto cfg = testing::reference_config(0.5);
  for (StationKind kind : kStationKinds) {
    for (double x : {20.0, 300.0, 4000.0}) {
      double prev = 1.0;
      for (double beta : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        cfg.tiers[0].sir_threshold = beta;
        const double p = conditional_sir_ccdf(x, 0, kind, cfg);
        CHECK(p >= 0.0);
        CHECK(p <= prev + 1e-12);
        prev = p;
      }
    }
  }
}

TEST_CASE("unit fading reduces to the exponential CCDF") {
  auto cfg = testing::reference_config(0.5);
  cfg.tiers[0].fading = {1, 1, 1, 1};
  const TierParams& tier = cfg.tiers[0];
  for (StationKind kind : kStationKinds) {
    for (double x : {10.0, 50.0, 200.0, 3000.0}) {
      const LinkMix mix = link_mix(x, tier, kind, cfg.environment);
      double expected = 0.0;
      for (LinkKind link : kLinkKinds)
        expected += mix.weight(link) *
                    laplace_interference(tier.sir_threshold / (tier.power * path_loss(x, tier, kind, link)), cfg);
      CHECK(conditional_sir_ccdf(x, 0, kind, cfg) == Approx(expected).epsilon(1e-12));
      auto verbatim = cfg;
      verbatim.verbatim_formulas = true;
      CHECK(conditional_sir_ccdf(x, 0, kind, verbatim) == Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("printed formulas give a smaller conditional coverage for M > 1") {
  auto cfg = testing::reference_config(0.5);
  auto verbatim = cfg;
  verbatim.verbatim_formulas = true;
  for (double x : {10.0, 100.0})
    CHECK(conditional_sir_ccdf(x, 0, StationKind::Ground, verbatim) <
          conditional_sir_ccdf(x, 0, StationKind::Ground, cfg));
}

TEST_CASE("bound components follow the thinning") {
  const auto ground_only = coverage_bound_total(testing::reference_config(0.0));
  CHECK(ground_only.component(0, StationKind::Aerial) == 0.0);
  CHECK(ground_only.component(0, StationKind::Ground) > 0.0);

  const auto aerial_only = coverage_bound_total(testing::reference_config(1.0));
  CHECK(aerial_only.component(0, StationKind::Ground) == 0.0);
  CHECK(aerial_only.component(0, StationKind::Aerial) > 0.0);

  const auto mixed = coverage_bound_total(testing::reference_config(0.5));
  CHECK(mixed.total_raw ==
        Approx(mixed.component(0, StationKind::Ground) + mixed.component(0, StationKind::Aerial)).epsilon(1e-12));
  CHECK(mixed.total == std::min(1.0, mixed.total_raw));

  const auto none = coverage_bound_total(zero_density());
  CHECK(none.total_raw == 0.0);
  CHECK(none.total == 0.0);
}

TEST_CASE("raw bound can exceed one and is clamped on request") {
  auto cfg = testing::reference_config(0.5);
  cfg.tiers[0].sir_threshold = 0.05;
  const auto clamped = coverage_bound_total(cfg);
  CHECK(clamped.total_raw > 1.0);
  CHECK(clamped.total == 1.0);
  cfg.clamp_bound = false;
  const auto raw = coverage_bound_total(cfg);
  CHECK(raw.total == raw.total_raw);
}

TEST_CASE("ground at q and aerial at 1 - q agree when the channels coincide") {
  auto cfg = testing::reference_config(0.3);
  TierParams& tier = cfg.tiers[0];
  tier.alpha_los = 3.0;
  tier.alpha_nlos = 3.0;
  tier.altitude = 1e-6;
  tier.fading = {1, 1, 1, 1};
  auto mirrored = cfg;
  mirrored.tiers[0].aerial_fraction = 0.7;

  const double ground = coverage_bound_component(0, StationKind::Ground, cfg);
  const double aerial = coverage_bound_component(0, StationKind::Aerial, mirrored);
  CHECK(ground > 0.0);
  CHECK(aerial == Approx(ground).epsilon(1e-4));
}

TEST_CASE("bound is nonincreasing in beta") {
  auto cfg = testing::reference_config(0.5);
  double prev = 1e9;
  for (double beta : {0.5, 1.0, 5.0, 50.0}) {
    cfg.tiers[0].sir_threshold = beta;
    const double b = coverage_bound_total(cfg).total_raw;
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("halving the tolerances moves the bound by less than the coarse tolerance") {
  for (double q : {0.0, 0.5, 1.0}) {
    auto coarse = testing::reference_config(q);
    auto fine = coarse;
    fine.quad.inner_rel /= 2;
    fine.quad.inner_abs /= 2;
    fine.quad.outer_rel /= 2;
    fine.quad.outer_abs /= 2;
    const double a = coverage_bound_total(coarse).total_raw;
    const double b = coverage_bound_total(fine).total_raw;
    CAPTURE(q);
    CHECK(std::abs(a - b) < std::max(coarse.quad.outer_rel * std::abs(b), coarse.quad.outer_abs));
  }
}

TEST_CASE("unreachable tolerances surface as numerical errors") {
  auto cfg = testing::reference_config(0.5);
  cfg.quad.inner_rel = 1e-300;
  cfg.quad.inner_abs = 1e-300;
  CHECK_THROWS_AS(laplace_exponent(1e12, 0, StationKind::Aerial, cfg), NumericalError);
}
