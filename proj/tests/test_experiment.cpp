#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aerocov/analytic.hpp"
#include "aerocov/experiment.hpp"
#include "support.hpp"

using namespace aerocov;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

constexpr const char* kMinimal = R"({"tiers": [{"density": 5e-3}]})";

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("aerocov_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string command = std::string(AEROCOV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_experiment(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

SweepSpec analytic_sweep(std::vector<double> grid) {
  SweepSpec spec;
  spec.axis = SweepAxis::AerialFraction;
  spec.grid = std::move(grid);
  spec.modes = {true, false};
  return spec;
}

}  // namespace

TEST_CASE("minimal configuration fills the defaults") {
  const ExperimentFile file = parse_experiment(kMinimal);
  const NetworkConfig& cfg = file.network;
  REQUIRE(cfg.tiers.size() == 1);
  const TierParams& t = cfg.tiers[0];
  CHECK(t.density == Approx(5e-9));
  CHECK(t.power == 1.0);
  CHECK(t.sir_threshold == 5.0);
  CHECK(t.aerial_fraction == 0.0);
  CHECK(t.altitude == 200.0);
  CHECK(t.d0 == 80.0);
  CHECK(t.d1 == 164.0);
  CHECK(t.alpha_los == 2.4);
  CHECK(t.alpha_nlos == 4.0);
  CHECK(t.fading.m_los_ground == 3);
  CHECK(t.fading.m_nlos_ground == 1);
  CHECK(cfg.environment.name == EnvironmentPreset::Name::Urban);
  CHECK_FALSE(cfg.region_radius.has_value());
  CHECK_FALSE(cfg.verbatim_formulas);
  CHECK(cfg.clamp_bound);
  CHECK(cfg.far_field);
  CHECK(file.simulation.snapshots == 40000);
  CHECK_FALSE(file.sweep.has_value());
}

TEST_CASE("density units") {
  const auto per_m2 = parse_experiment(R"({"density_unit": "per_m2", "tiers": [{"density": 0.01}]})");
  CHECK(per_m2.network.tiers[0].density == 0.01);
  const auto bad = issues_of(R"({"density_unit": "per_ha", "tiers": [{"density": 1}]})");
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].path == "density_unit");
}

TEST_CASE("environments by name and with overrides") {
  const auto sub = parse_experiment(R"({"environment": "SubUrban", "tiers": [{"density": 1}]})");
  CHECK(sub.network.environment.a_env == 4.88);
  CHECK(sub.network.environment.b_env == 0.43);
  const auto custom = parse_experiment(
      R"({"environment": {"preset": "HighRise", "b_env": 0.1}, "tiers": [{"density": 1}]})");
  CHECK(custom.network.environment.name == EnvironmentPreset::Name::HighRise);
  CHECK(custom.network.environment.a_env == 27.23);
  CHECK(custom.network.environment.b_env == 0.1);
  const auto unknown = issues_of(R"({"environment": "Rural", "tiers": [{"density": 1}]})");
  REQUIRE(unknown.size() == 1);
  CHECK(unknown[0].constraint.find("SubUrban") != std::string::npos);
}

TEST_CASE("strict schema and validation passthrough") {
  const auto unknown = issues_of(R"({"tiers": [{"density": 1, "alpha_l": 2.5}]})");
  REQUIRE(unknown.size() == 1);
  CHECK(unknown[0].path == "tiers[0].alpha_l");
  CHECK(unknown[0].constraint == "unknown key");

  const auto invalid = issues_of(R"({"tiers": [{"density": 1, "aerial_fraction": 1.2}]})");
  REQUIRE(invalid.size() == 1);
  CHECK(invalid[0].path == "tiers[0].aerial_fraction");

  CHECK(issues_of(R"({"tiers": []})").front().path == "tiers");
  CHECK(issues_of(R"({"tiers": [{"power": 2}]})").front().path == "tiers[0].density");
  CHECK(issues_of(R"({"tiers": [{"density": "many"}]})").front().constraint == "must be a number");
}

TEST_CASE("parse errors report line and column") {
  try {
    parse_experiment("{\n  \"tiers\": [\n    {\"density\": 1,}\n  ]\n}");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("region radius and flags") {
  const auto fixed = parse_experiment(
      R"({"region_radius": 2500, "paper_verbatim": true, "clamp_bound": false, "far_field": false,
          "tiers": [{"density": 1}]})");
  CHECK(fixed.network.region_radius == 2500.0);
  CHECK(fixed.network.verbatim_formulas);
  CHECK_FALSE(fixed.network.clamp_bound);
  CHECK_FALSE(fixed.network.far_field);
  const auto automatic = parse_experiment(R"({"region_radius": "auto", "tiers": [{"density": 1}]})");
  CHECK_FALSE(automatic.network.region_radius.has_value());
  CHECK(issues_of(R"({"region_radius": -3, "tiers": [{"density": 1}]})").front().path == "region_radius");
}

TEST_CASE("sweep block") {
  const auto file = parse_experiment(R"({
    "tiers": [{"density": 5e-3}],
    "simulation": {"snapshots": 500, "seed": 9},
    "sweep": {"axis": "altitude", "grid": [50, 100], "environments": ["SubUrban", "HighRise"],
              "modes": ["analytic"]}})");
  REQUIRE(file.sweep.has_value());
  CHECK(file.sweep->axis == SweepAxis::Altitude);
  CHECK(file.sweep->grid == std::vector<double>{50, 100});
  CHECK(file.sweep->environments.size() == 2);
  CHECK(file.sweep->modes.analytic);
  CHECK_FALSE(file.sweep->modes.montecarlo);
  CHECK(file.sweep->mc_snapshots == 500);
  CHECK(file.sweep->master_seed == 9);
  CHECK(issues_of(R"({"tiers": [{"density": 1}], "sweep": {"axis": "beta", "grid": [1]}})").front().path ==
        "sweep.axis");
}

TEST_CASE("analytic sweep over the thinning endpoints") {
  const auto cfg = testing::reference_config();
  const auto rows = run_sweep(cfg, analytic_sweep({0.0, 1.0}));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].axis == "aerial_fraction");
  CHECK(rows[0].axis_value == 0.0);
  CHECK(rows[1].axis_value == 1.0);
  CHECK(rows[0].environment == "Urban");
  for (const auto& row : rows) {
    CHECK(row.bound_raw.has_value());
    CHECK_FALSE(row.mc_p.has_value());
    CHECK_FALSE(row.analytic_secs.has_value());
  }

  SweepSpec spec = analytic_sweep({0.0, 1.0});
  const auto q0 = coverage_bound_total(apply_axis(cfg, spec, 0.0));
  const auto q1 = coverage_bound_total(apply_axis(cfg, spec, 1.0));
  CHECK(q0.component(0, StationKind::Aerial) == 0.0);
  CHECK(q1.component(0, StationKind::Ground) == 0.0);
  CHECK(*rows[0].bound_raw == q0.total_raw);
}

TEST_CASE("sweep axes mutate the target tier") {
  auto cfg = testing::reference_config();
  SweepSpec spec;
  spec.axis = SweepAxis::Density;
  CHECK(apply_axis(cfg, spec, 2.0).tiers[0].density == Approx(2e-6));
  spec.density_unit = DensityUnit::PerSquareMeter;
  CHECK(apply_axis(cfg, spec, 2.0).tiers[0].density == 2.0);
  spec.axis = SweepAxis::Altitude;
  CHECK(apply_axis(cfg, spec, 800.0).tiers[0].altitude == 800.0);
}

TEST_CASE("sweep specification errors") {
  const auto cfg = testing::reference_config();
  CHECK_THROWS_AS(validate_sweep(cfg, analytic_sweep({})), ConfigError);
  CHECK_THROWS_AS(validate_sweep(cfg, analytic_sweep({0.5, 0.5})), ConfigError);
  CHECK_THROWS_AS(validate_sweep(cfg, analytic_sweep({0.5, 0.2})), ConfigError);
  try {
    validate_sweep(cfg, analytic_sweep({0.5, 1.5}));
    FAIL("expected a validation error");
  } catch (const ConfigError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].path == "sweep.grid[1] -> tiers[0].aerial_fraction");
  }
  SweepSpec none = analytic_sweep({0.5});
  none.modes = {false, false};
  CHECK_THROWS_AS(validate_sweep(cfg, none), ConfigError);
  SweepSpec tier = analytic_sweep({0.5});
  tier.tier_index = 3;
  CHECK_THROWS_AS(validate_sweep(cfg, tier), ConfigError);
}

TEST_CASE("numerical failures are recorded per point") {
  auto cfg = testing::reference_config();
  cfg.quad.inner_rel = 1e-300;
  cfg.quad.inner_abs = 1e-300;
  const auto rows = run_sweep(cfg, analytic_sweep({0.0, 0.5}));
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.failure.has_value());
    CHECK_FALSE(row.bound_raw.has_value());
  }
}

TEST_CASE("extending the grid keeps earlier Monte Carlo rows") {
  const auto cfg = testing::reference_config();
  SweepSpec spec;
  spec.axis = SweepAxis::AerialFraction;
  spec.modes = {false, true};
  spec.mc_snapshots = 200;
  spec.master_seed = 77;
  spec.grid = {0.0, 0.5};
  const auto short_rows = run_sweep(cfg, spec);
  spec.grid = {0.0, 0.5, 1.0};
  const auto long_rows = run_sweep(cfg, spec);
  REQUIRE(long_rows.size() == 3);
  CHECK(short_rows[0] == long_rows[0]);
  CHECK(short_rows[1] == long_rows[1]);
  CHECK(long_rows[0].mc_n == 200u);
}

TEST_CASE("CSV output") {
  const auto rows = run_sweep(testing::reference_config(), analytic_sweep({0.0, 1.0}));
  const fs::path path = scratch_dir() / "analytic.csv";
  emit_csv(rows, path);
  const std::string text = read_text(path);
  CHECK(text.substr(0, text.find('\n')) == kCsvHeader);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  const std::string second = text.substr(text.find('\n') + 1);
  CHECK(second.rfind("aerial_fraction,0,Urban,", 0) == 0);
  CHECK(second.find(",,,,,\n") != std::string::npos);

  emit_csv(rows, scratch_dir() / "again.csv");
  CHECK(read_text(scratch_dir() / "again.csv") == text);

  CHECK_THROWS(emit_csv(std::vector<ResultRow>{}, path));
  CHECK_THROWS_AS(emit_csv(rows, scratch_dir() / "missing" / "dir" / "x.csv"), IoError);
}

TEST_CASE("CSV round trip is byte identical") {
  ResultRow a;
  a.axis = "density";
  a.axis_value = 1e-4;
  a.environment = "SubUrban";
  a.bound_raw = 0.123456789012345;
  a.bound_clamped = 0.123456789012345;
  a.mc_p = 0.1;
  a.mc_ci = 3.3e-3;
  a.mc_n = 40000;
  a.analytic_secs = 0.25;
  a.mc_secs = 12.5;
  ResultRow b;
  b.axis = "density";
  b.axis_value = 1e3;
  b.environment = "HighRise";
  b.mc_p = 0.0;
  b.mc_ci = 0.0;
  b.mc_n = 7;
  const std::vector<ResultRow> rows{a, b};
  const std::string text = csv_text(rows);
  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == 2);
  CHECK(csv_text(parsed) == text);
  CHECK(parsed[1].bound_raw == std::nullopt);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK_THROWS_AS(parse_csv("axis,value\n"), IoError);
}

TEST_CASE("LOS curves") {
  auto cfg = testing::reference_config();
  cfg.tiers[0].d0 = 18.0;
  cfg.tiers[0].d1 = 36.0;
  CurveSpec spec;
  spec.kind = CurveKind::LosG2G;
  for (int d = 0; d <= 200; d += 2) spec.grid.push_back(d);
  const CurveTable g2g = compute_curves(cfg, spec);
  CHECK(g2g.header == std::vector<std::string>{"distance", "p_los_g2g"});
  double prev = 1.0;
  for (const auto& row : g2g.rows) {
    if (row[0] <= 18.0) CHECK(row[1] == Approx(1.0));
    else CHECK(row[1] < 1.0);
    CHECK(row[1] <= prev + 1e-15);
    prev = row[1];
  }

  spec.kind = CurveKind::LosA2G;
  spec.series = {50.0, 400.0};
  const CurveTable a2g = compute_curves(cfg, spec);
  CHECK(a2g.header == std::vector<std::string>{"distance", "h=50", "h=400"});
  for (const auto& row : a2g.rows) CHECK(row[2] >= row[1]);

  spec.grid = {10.0, 5.0};
  CHECK_THROWS_AS(compute_curves(cfg, spec), ConfigError);
  CHECK_THROWS_AS(parse_curve_kind("los"), ConfigError);
}

TEST_CASE("interference CCDF curves") {
  CurveSpec spec;
  spec.kind = CurveKind::InterferenceCcdf;
  spec.grid = {1e-14, 1e-12, 1e-10};
  spec.series = {0.1, 0.9};
  spec.simulation.n_snapshots = 600;
  const CurveTable table = compute_curves(testing::reference_config(), spec);
  CHECK(table.header == std::vector<std::string>{"threshold", "q=0.1", "q=0.9"});
  REQUIRE(table.rows.size() == 3);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][2] >= table.rows[i][1] - 0.08);
    if (i > 0) CHECK(table.rows[i][1] <= table.rows[i - 1][1]);
  }
  const std::string text = curve_csv_text(table);
  CHECK(text.rfind("threshold,q=0.1,q=0.9\n", 0) == 0);
}

TEST_CASE("command-line exit codes") {
  const fs::path good = write_text("good.json", R"({"tiers": [{"density": 5e-3}],
      "simulation": {"snapshots": 100, "seed": 4}})");
  const fs::path bad = write_text("bad.json", R"({"tiers": [{"density": 5e-3, "aerial_fraction": 1.2}]})");
  const fs::path tight = write_text("tight.json", R"({"tiers": [{"density": 5e-3}],
      "quadrature": {"inner_rel_tol": 1e-300, "inner_abs_tol": 1e-300}})");
  const std::string out = (scratch_dir() / "cli.csv").string();

  CHECK(run_cli("eval --config " + good.string() + " --mode analytic") == 0);
  CHECK(run_cli("sweep --config " + good.string() + " --sweep-axis aerial_fraction --sweep-grid 0,1 --out " +
                out) == 0);
  CHECK(read_text(out).rfind(kCsvHeader, 0) == 0);
  CHECK(run_cli("curves --config " + good.string() + " --curve los_g2g --grid 0,10,100") == 0);

  CHECK(run_cli("eval --config " + bad.string()) == 1);
  CHECK(run_cli("sweep --config " + good.string() + " --sweep-axis aerial_fraction --sweep-grid 0.5,0.1") == 1);
  CHECK(run_cli("sweep --config " + good.string() + " --sweep-axis aerial_fraction --sweep-grid 0,x") == 1);
  CHECK(run_cli("frobnicate") == 1);

  CHECK(run_cli("sweep --config " + tight.string() +
                " --mode analytic --sweep-axis aerial_fraction --sweep-grid 0,1") == 2);

  CHECK(run_cli("eval --config " + (scratch_dir() / "absent.json").string()) == 3);
  CHECK(run_cli("sweep --config " + good.string() +
                " --mode analytic --sweep-axis aerial_fraction --sweep-grid 0 --out " +
                (scratch_dir() / "no" / "such" / "dir.csv").string()) == 3);
}

TEST_CASE("bundled configurations load") {
  for (const char* name : {"fig2.json", "fig3.json", "fig4.json", "two_tier.json"}) {
    CAPTURE(name);
    const ExperimentFile file = load_experiment(fs::path(AEROCOV_CONFIG_DIR) / name);
    CHECK(file.network.tiers[0].density > 0.0);
    if (file.sweep) CHECK_NOTHROW(validate_sweep(file.network, *file.sweep));
  }
  const auto fig3 = load_experiment(fs::path(AEROCOV_CONFIG_DIR) / "fig3.json");
  CHECK(fig3.network.tiers[0].altitude == 400.0);
  CHECK(fig3.sweep->axis == SweepAxis::Density);
}
