#include "aerocov/model.hpp"

#include <cmath>
#include <sstream>

namespace aerocov {

std::string_view to_string(StationKind kind) {
  return kind == StationKind::Ground ? "ground" : "aerial";
}

std::string_view to_string(LinkKind link) {
  return link == LinkKind::Los ? "los" : "nlos";
}

std::string_view to_string(EnvironmentPreset::Name name) {
  switch (name) {
    case EnvironmentPreset::Name::HighRise: return "HighRise";
    case EnvironmentPreset::Name::DenseUrban: return "DenseUrban";
    case EnvironmentPreset::Name::Urban: return "Urban";
    case EnvironmentPreset::Name::SubUrban: return "SubUrban";
  }
  return "?";
}

EnvironmentPreset environment_preset(EnvironmentPreset::Name name) {
  using N = EnvironmentPreset::Name;
  switch (name) {
    case N::HighRise: return {N::HighRise, 27.23, 0.08};
    case N::DenseUrban: return {N::DenseUrban, 12.08, 0.11};
    case N::Urban: return {N::Urban, 9.61, 0.16};
    case N::SubUrban: return {N::SubUrban, 4.88, 0.43};
  }
  throw ConfigError("unknown environment preset");
}

EnvironmentPreset environment_preset(std::string_view name) {
  for (auto candidate : kEnvironmentNames) {
    if (to_string(candidate) == name) return environment_preset(candidate);
  }
  throw ConfigError("environment", "unknown environment '" + std::string(name) +
                                      "'; expected one of HighRise, DenseUrban, Urban, SubUrban");
}

double TierParams::intercept(StationKind kind, LinkKind link) const noexcept {
  if (kind == StationKind::Ground)
    return link == LinkKind::Los ? intercept_los_ground : intercept_nlos_ground;
  return link == LinkKind::Los ? intercept_los_aerial : intercept_nlos_aerial;
}

double Station::ground_distance() const noexcept { return std::sqrt(x * x + y * y); }

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  out << "invalid configuration:";
  for (const auto& issue : issues) out << "\n  " << issue.path << ": " << issue.constraint;
  return out.str();
}

class IssueCollector {
 public:
  void require(bool ok, std::string path, std::string constraint) {
    if (!ok) issues_.push_back({std::move(path), std::move(constraint)});
  }
  std::vector<ConfigIssue> take() { return std::move(issues_); }

 private:
  std::vector<ConfigIssue> issues_;
};

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_tier(IssueCollector& c, const TierParams& t, const std::string& p) {
  c.require(std::isfinite(t.density) && t.density >= 0.0, p + ".density", "density >= 0");
  c.require(positive(t.power), p + ".power", "power > 0");
  c.require(positive(t.sir_threshold), p + ".sir_threshold", "sir_threshold > 0");
  c.require(t.aerial_fraction >= 0.0 && t.aerial_fraction <= 1.0, p + ".aerial_fraction",
            "aerial_fraction ∈ [0,1]");
  c.require(positive(t.altitude), p + ".altitude", "altitude > 0");
  c.require(positive(t.d0), p + ".d0", "d0 > 0");
  c.require(positive(t.d1), p + ".d1", "d1 > 0");
  c.require(std::isfinite(t.alpha_los) && t.alpha_los > 2.0, p + ".alpha_los", "alpha_los > 2");
  c.require(std::isfinite(t.alpha_nlos) && t.alpha_nlos >= t.alpha_los, p + ".alpha_nlos",
            "alpha_nlos >= alpha_los");
  c.require(positive(t.intercept_los_ground), p + ".intercept_los_ground", "intercept > 0");
  c.require(positive(t.intercept_nlos_ground), p + ".intercept_nlos_ground", "intercept > 0");
  c.require(positive(t.intercept_los_aerial), p + ".intercept_los_aerial", "intercept > 0");
  c.require(positive(t.intercept_nlos_aerial), p + ".intercept_nlos_aerial", "intercept > 0");

  const auto& f = t.fading;
  const std::string fp = p + ".fading";
  c.require(f.m_los_ground >= 1, fp + ".m_los_ground", "shape >= 1");
  c.require(f.m_nlos_ground >= 1, fp + ".m_nlos_ground", "shape >= 1");
  c.require(f.m_los_aerial >= 1, fp + ".m_los_aerial", "shape >= 1");
  c.require(f.m_nlos_aerial >= 1, fp + ".m_nlos_aerial", "shape >= 1");
  c.require(f.m_los_ground >= f.m_nlos_ground, fp + ".m_los_ground",
            "fading shape ordering m_los_ground >= m_nlos_ground");
  c.require(f.m_los_aerial >= f.m_nlos_aerial, fp + ".m_los_aerial",
            "fading shape ordering m_los_aerial >= m_nlos_aerial");
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string path, std::string constraint)
    : ConfigError(std::vector<ConfigIssue>{{std::move(path), std::move(constraint)}}) {}

ConfigError::ConfigError(const std::string& message) : std::runtime_error(message) {}

std::vector<ConfigIssue> config_issues(const NetworkConfig& cfg) {
  IssueCollector c;
  c.require(!cfg.tiers.empty(), "tiers", "at least one tier (K >= 1)");
  for (std::size_t i = 0; i < cfg.tiers.size(); ++i)
    check_tier(c, cfg.tiers[i], "tiers[" + std::to_string(i) + "]");

  c.require(positive(cfg.environment.a_env), "environment.a_env", "a_env > 0");
  c.require(positive(cfg.environment.b_env), "environment.b_env", "b_env > 0");
  if (cfg.region_radius)
    c.require(positive(*cfg.region_radius), "region_radius", "region_radius > 0");

  c.require(positive(cfg.quad.inner_rel), "quadrature.inner_rel_tol", "tolerance > 0");
  c.require(positive(cfg.quad.inner_abs), "quadrature.inner_abs_tol", "tolerance > 0");
  c.require(positive(cfg.quad.outer_rel), "quadrature.outer_rel_tol", "tolerance > 0");
  c.require(positive(cfg.quad.outer_abs), "quadrature.outer_abs_tol", "tolerance > 0");
  return c.take();
}

NetworkConfig validate_config(NetworkConfig cfg) {
  auto issues = config_issues(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

}  // namespace aerocov
