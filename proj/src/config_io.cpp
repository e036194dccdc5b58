#include "aerocov/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace aerocov {

using json = nlohmann::json;

double density_scale(DensityUnit unit) noexcept {
  return unit == DensityUnit::PerSquareKilometer ? kPerSquareKilometer : 1.0;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::AerialFraction: return "aerial_fraction";
    case SweepAxis::Density: return "density";
    case SweepAxis::Altitude: return "altitude";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto axis : {SweepAxis::AerialFraction, SweepAxis::Density, SweepAxis::Altitude})
    if (to_string(axis) == name) return axis;
  throw ConfigError("sweep.axis", "axis must be one of aerial_fraction, density, altitude");
}

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path, std::vector<ConfigIssue>& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (!node_.is_object()) issue(path_.empty() ? "<root>" : path_, "must be a JSON object");
  }

  ~ObjectReader() {
    if (!node_.is_object()) return;
    for (const auto& [key, value] : node_.items())
      if (!seen_.contains(key)) issue(child(key), "unknown key");
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!node_.is_object()) return nullptr;
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number()) out = v->get<double>();
      else issue(child(key), "must be a number");
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else issue(child(key), "must be an integer");
    }
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
      else issue(child(key), "must be a nonnegative integer");
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else issue(child(key), "must be true or false");
    }
  }

  void issue(std::string path, std::string constraint) {
    issues_.push_back({std::move(path), std::move(constraint)});
  }

  std::vector<ConfigIssue>& issues() { return issues_; }

 private:
  const json& node_;
  std::string path_;
  std::vector<ConfigIssue>& issues_;
  std::set<std::string> seen_;
};

std::optional<EnvironmentPreset> read_environment_name(const json& v, const std::string& path,
                                                       std::vector<ConfigIssue>& issues) {
  if (!v.is_string()) {
    issues.push_back({path, "must be an environment name"});
    return std::nullopt;
  }
  try {
    return environment_preset(v.get<std::string>());
  } catch (const ConfigError& e) {
    for (auto issue : e.issues()) issues.push_back({path, issue.constraint});
    return std::nullopt;
  }
}

EnvironmentPreset read_environment(const json& v, const std::string& path,
                                   std::vector<ConfigIssue>& issues) {
  if (v.is_string()) return read_environment_name(v, path, issues).value_or(EnvironmentPreset{});
  ObjectReader r(v, path, issues);
  EnvironmentPreset env;
  if (const json* name = r.find("preset")) {
    env = read_environment_name(*name, r.child("preset"), issues).value_or(env);
  } else {
    r.issue(r.child("preset"), "required");
  }
  r.number("a_env", env.a_env);
  r.number("b_env", env.b_env);
  return env;
}

std::optional<DensityUnit> read_density_unit(const json& v, const std::string& path,
                                             std::vector<ConfigIssue>& issues) {
  if (v == "per_km2") return DensityUnit::PerSquareKilometer;
  if (v == "per_m2") return DensityUnit::PerSquareMeter;
  issues.push_back({path, "must be \"per_km2\" or \"per_m2\""});
  return std::nullopt;
}

TierParams read_tier(const json& v, const std::string& path, double scale,
                     std::vector<ConfigIssue>& issues) {
  ObjectReader r(v, path, issues);
  TierParams t;
  if (r.find("density") == nullptr) r.issue(r.child("density"), "required");
  r.number("density", t.density);
  t.density *= scale;
  r.number("power", t.power);
  r.number("sir_threshold", t.sir_threshold);
  r.number("aerial_fraction", t.aerial_fraction);
  r.number("altitude", t.altitude);
  r.number("d0", t.d0);
  r.number("d1", t.d1);
  r.number("alpha_los", t.alpha_los);
  r.number("alpha_nlos", t.alpha_nlos);
  r.number("intercept_los_ground", t.intercept_los_ground);
  r.number("intercept_nlos_ground", t.intercept_nlos_ground);
  r.number("intercept_los_aerial", t.intercept_los_aerial);
  r.number("intercept_nlos_aerial", t.intercept_nlos_aerial);
  if (const json* f = r.find("fading")) {
    ObjectReader fr(*f, r.child("fading"), issues);
    fr.integer("m_los_ground", t.fading.m_los_ground);
    fr.integer("m_nlos_ground", t.fading.m_nlos_ground);
    fr.integer("m_los_aerial", t.fading.m_los_aerial);
    fr.integer("m_nlos_aerial", t.fading.m_nlos_aerial);
  }
  return t;
}

SweepSpec read_sweep(const json& v, std::vector<ConfigIssue>& issues) {
  ObjectReader r(v, "sweep", issues);
  SweepSpec spec;
  if (const json* axis = r.find("axis")) {
    if (axis->is_string()) {
      try {
        spec.axis = parse_sweep_axis(axis->get<std::string>());
      } catch (const ConfigError& e) {
        for (const auto& i : e.issues()) issues.push_back(i);
      }
    } else {
      r.issue("sweep.axis", "must be a string");
    }
  } else {
    r.issue("sweep.axis", "required");
  }
  if (const json* grid = r.find("grid")) {
    if (grid->is_array() && std::all_of(grid->begin(), grid->end(), [](const json& e) { return e.is_number(); }))
      spec.grid = grid->get<std::vector<double>>();
    else
      r.issue("sweep.grid", "must be an array of numbers");
  } else {
    r.issue("sweep.grid", "required");
  }
  std::uint64_t tier = 0;
  r.unsigned_integer("tier", tier);
  spec.tier_index = static_cast<std::size_t>(tier);
  if (const json* envs = r.find("environments")) {
    if (envs->is_array()) {
      for (std::size_t i = 0; i < envs->size(); ++i) {
        const std::string p = "sweep.environments[" + std::to_string(i) + "]";
        spec.environments.push_back(read_environment((*envs)[i], p, issues));
      }
    } else {
      r.issue("sweep.environments", "must be an array");
    }
  }
  if (const json* modes = r.find("modes")) {
    spec.modes = {false, false};
    if (modes->is_array()) {
      for (const auto& m : *modes) {
        if (m == "analytic") spec.modes.analytic = true;
        else if (m == "montecarlo") spec.modes.montecarlo = true;
        else r.issue("sweep.modes", "entries must be \"analytic\" or \"montecarlo\"");
      }
    } else {
      r.issue("sweep.modes", "must be an array");
    }
  }
  return spec;
}

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

ExperimentFile parse_experiment(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<json>", "parse error at " + locate(json_text, e.byte) + ": " + e.what());
  }

  ExperimentFile file;
  std::vector<ConfigIssue> issues;
  {
    ObjectReader r(root, "", issues);
    if (const json* unit = r.find("density_unit"))
      file.density_unit = read_density_unit(*unit, "density_unit", issues).value_or(file.density_unit);
    const double scale = density_scale(file.density_unit);

    NetworkConfig& cfg = file.network;
    if (const json* env = r.find("environment")) cfg.environment = read_environment(*env, "environment", issues);
    if (const json* radius = r.find("region_radius")) {
      if (*radius == "auto") cfg.region_radius.reset();
      else if (radius->is_number()) cfg.region_radius = radius->get<double>();
      else r.issue("region_radius", "must be \"auto\" or a number of meters");
    }
    if (const json* quad = r.find("quadrature")) {
      ObjectReader q(*quad, "quadrature", issues);
      q.number("inner_rel_tol", cfg.quad.inner_rel);
      q.number("inner_abs_tol", cfg.quad.inner_abs);
      q.number("outer_rel_tol", cfg.quad.outer_rel);
      q.number("outer_abs_tol", cfg.quad.outer_abs);
    }
    r.boolean("paper_verbatim", cfg.verbatim_formulas);
    r.boolean("clamp_bound", cfg.clamp_bound);
    r.boolean("far_field", cfg.far_field);
    if (const json* tiers = r.find("tiers"); tiers && tiers->is_array()) {
      for (std::size_t i = 0; i < tiers->size(); ++i)
        cfg.tiers.push_back(read_tier((*tiers)[i], "tiers[" + std::to_string(i) + "]", scale, issues));
    } else {
      r.issue("tiers", "required array of tier objects");
    }
    if (const json* sim = r.find("simulation")) {
      ObjectReader s(*sim, "simulation", issues);
      std::uint64_t snapshots = file.simulation.snapshots;
      s.unsigned_integer("snapshots", snapshots);
      file.simulation.snapshots = static_cast<std::size_t>(snapshots);
      s.unsigned_integer("seed", file.simulation.seed);
    }
    if (const json* sweep = r.find("sweep")) {
      SweepSpec spec = read_sweep(*sweep, issues);
      spec.density_unit = file.density_unit;
      spec.mc_snapshots = file.simulation.snapshots;
      spec.master_seed = file.simulation.seed;
      file.sweep = std::move(spec);
    }
  }
  if (issues.empty()) {
    for (auto& i : config_issues(file.network)) issues.push_back(std::move(i));
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return file;
}

ExperimentFile load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

NetworkConfig load_config(const std::filesystem::path& path) { return load_experiment(path).network; }

}  // namespace aerocov
