#include "aerocov/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aerocov/analytic.hpp"
#include "aerocov/channel.hpp"

namespace aerocov {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return fields;
    start = pos + 1;
  }
}

template <class T>
std::optional<T> parse_field(std::string_view field) {
  if (field.empty()) return std::nullopt;
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw IoError("malformed CSV field '" + std::string(field) + "'");
  return value;
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_integral_v<T>) return std::to_string(*v);
  else return format_number(*v);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

NetworkConfig with_unit_fading(NetworkConfig cfg) {
  for (auto& tier : cfg.tiers) tier.fading = {1, 1, 1, 1};
  cfg.verbatim_formulas = false;
  return cfg;
}

}  // namespace

NetworkConfig apply_axis(const NetworkConfig& cfg, const SweepSpec& spec, double value) {
  NetworkConfig out = cfg;
  if (spec.tier_index >= out.tiers.size())
    throw ConfigError("sweep.tier", "tier index out of range");
  TierParams& tier = out.tiers[spec.tier_index];
  switch (spec.axis) {
    case SweepAxis::AerialFraction: tier.aerial_fraction = value; break;
    case SweepAxis::Density: tier.density = value * density_scale(spec.density_unit); break;
    case SweepAxis::Altitude: tier.altitude = value; break;
  }
  return out;
}

void validate_sweep(const NetworkConfig& cfg, const SweepSpec& spec) {
  std::vector<ConfigIssue> issues;
  if (spec.grid.empty()) issues.push_back({"sweep.grid", "grid must be nonempty"});
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > spec.grid[i - 1])) {
      issues.push_back({"sweep.grid", "grid must be strictly ascending"});
      break;
    }
  }
  if (spec.tier_index >= cfg.tiers.size()) issues.push_back({"sweep.tier", "tier index out of range"});
  if (!spec.modes.analytic && !spec.modes.montecarlo)
    issues.push_back({"sweep.modes", "at least one mode required"});
  if (spec.modes.montecarlo && spec.mc_snapshots == 0)
    issues.push_back({"simulation.snapshots", "snapshots >= 1"});
  if (issues.empty()) {
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      for (auto& issue : config_issues(apply_axis(cfg, spec, spec.grid[g]))) {
        issue.path = "sweep.grid[" + std::to_string(g) + "] -> " + issue.path;
        issues.push_back(std::move(issue));
      }
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::vector<ResultRow> run_sweep(const NetworkConfig& cfg, const SweepSpec& spec, unsigned threads) {
  validate_sweep(cfg, spec);
  std::vector<EnvironmentPreset> environments = spec.environments;
  if (environments.empty()) environments.push_back(cfg.environment);

  std::vector<ResultRow> rows;
  for (const auto& env : environments) {
    NetworkConfig base = cfg;
    base.environment = env;
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      const NetworkConfig point = apply_axis(base, spec, spec.grid[g]);
      ResultRow row;
      row.axis = std::string(to_string(spec.axis));
      row.axis_value = spec.grid[g];
      row.environment = std::string(to_string(env.name));

      if (spec.modes.analytic) {
        const auto start = Clock::now();
        try {
          const CoverageBound bound = coverage_bound_total(point);
          row.bound_raw = bound.total_raw;
          row.bound_clamped = std::min(1.0, bound.total_raw);
        } catch (const std::exception& e) {
          row.failure = std::string("analytic: ") + e.what();
        }
        if (spec.record_timing) row.analytic_secs = seconds_since(start);
      }
      if (spec.modes.montecarlo) {
        const auto start = Clock::now();
        SimulationOptions options;
        options.n_snapshots = spec.mc_snapshots;
        options.rng.master_seed = derive_seed(spec.master_seed, g);
        options.threads = threads;
        try {
          const CoverageEstimate est = estimate_coverage_mc(point, options);
          row.mc_p = est.p_hat;
          row.mc_ci = est.ci_halfwidth;
          row.mc_n = est.n_snapshots;
        } catch (const std::exception& e) {
          row.failure = row.failure.value_or("") + (row.failure ? "; " : "") + "montecarlo: " + e.what();
        }
        if (spec.record_timing) row.mc_secs = seconds_since(start);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string csv_text(std::span<const ResultRow> rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.axis + ',' + format_number(r.axis_value) + ',' + r.environment + ',' +
           optional_field(r.bound_raw) + ',' + optional_field(r.bound_clamped) + ',' +
           optional_field(r.mc_p) + ',' + optional_field(r.mc_ci) + ',' + optional_field(r.mc_n) +
           ',' + optional_field(r.analytic_secs) + ',' + optional_field(r.mc_secs) + '\n';
  }
  return out;
}

void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  write_file(path, csv_text(rows));
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (header) {
      if (line != kCsvHeader) throw IoError("unexpected CSV header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw IoError("CSV row must have 10 fields");
    ResultRow r;
    r.axis = std::string(f[0]);
    r.axis_value = parse_field<double>(f[1]).value_or(0.0);
    r.environment = std::string(f[2]);
    r.bound_raw = parse_field<double>(f[3]);
    r.bound_clamped = parse_field<double>(f[4]);
    r.mc_p = parse_field<double>(f[5]);
    r.mc_ci = parse_field<double>(f[6]);
    r.mc_n = parse_field<std::size_t>(f[7]);
    r.analytic_secs = parse_field<double>(f[8]);
    r.mc_secs = parse_field<double>(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

CurveKind parse_curve_kind(std::string_view name) {
  if (name == "los_g2g") return CurveKind::LosG2G;
  if (name == "los_a2g") return CurveKind::LosA2G;
  if (name == "interference_ccdf") return CurveKind::InterferenceCcdf;
  throw ConfigError("curve", "must be one of los_g2g, los_a2g, interference_ccdf");
}

CurveTable compute_curves(const NetworkConfig& cfg, const CurveSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("grid", "grid must be nonempty");
  if (!std::is_sorted(spec.grid.begin(), spec.grid.end()))
    throw ConfigError("grid", "grid must be ascending");
  const TierParams& tier = cfg.tiers.at(spec.tier_index);

  CurveTable table;
  switch (spec.kind) {
    case CurveKind::LosG2G: {
      table.header = {"distance", "p_los_g2g"};
      for (double d : spec.grid) table.rows.push_back({d, los_prob_g2g(d, tier.d0, tier.d1)});
      break;
    }
    case CurveKind::LosA2G: {
      const std::vector<double> heights = spec.series.empty() ? std::vector{tier.altitude} : spec.series;
      table.header = {"distance"};
      for (double h : heights) table.header.push_back("h=" + format_number(h));
      for (double d : spec.grid) {
        std::vector<double> row{d};
        for (double h : heights) row.push_back(los_prob_a2g(d, h, cfg.environment));
        table.rows.push_back(std::move(row));
      }
      break;
    }
    case CurveKind::InterferenceCcdf: {
      const std::vector<double> fractions =
          spec.series.empty() ? std::vector{tier.aerial_fraction} : spec.series;
      table.header = {"threshold"};
      std::vector<std::vector<double>> columns;
      for (double q : fractions) {
        table.header.push_back("q=" + format_number(q));
        NetworkConfig point = cfg;
        point.tiers[spec.tier_index].aerial_fraction = q;
        columns.push_back(estimate_interference_ccdf(validate_config(point), spec.grid, spec.simulation));
      }
      for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        std::vector<double> row{spec.grid[i]};
        for (const auto& c : columns) row.push_back(c[i]);
        table.rows.push_back(std::move(row));
      }
      break;
    }
  }
  return table;
}

std::string curve_csv_text(const CurveTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

void curves_command(const NetworkConfig& cfg, const CurveSpec& spec,
                    const std::filesystem::path& path) {
  write_file(path, curve_csv_text(compute_curves(cfg, spec)));
}

std::vector<CheckResult> run_cross_checks(const NetworkConfig& cfg, const SimulationOptions& options) {
  std::vector<CheckResult> results;

  {
    const CoverageBound bound = coverage_bound_total(cfg);
    const CoverageEstimate mc = estimate_coverage_mc(cfg, options);
    results.push_back({"bound >= mc - 2ci", bound.total_raw, mc.p_hat, 2.0 * mc.ci_halfwidth,
                       bound.total_raw >= mc.p_hat - 2.0 * mc.ci_halfwidth});
  }

  const double power = cfg.tiers.front().power;
  for (double scale : {0.1, 1.0, 10.0}) {
    const double t = scale / power;
    const double analytic = laplace_interference(t, cfg);
    const MeanEstimate mc = estimate_laplace_mc(t, cfg, options);
    const double tol = std::max(0.01 * analytic, 2.0 * mc.ci_halfwidth);
    results.push_back({"laplace t=" + format_number(scale) + "/P", analytic, mc.mean, tol,
                       std::abs(analytic - mc.mean) <= tol});
  }

  const NetworkConfig unit = with_unit_fading(cfg);
  for (double x : {10.0, 50.0, 200.0}) {
    const double analytic = conditional_sir_ccdf(x, 0, StationKind::Ground, unit);
    const CoverageEstimate mc = estimate_conditional_coverage_mc(unit, 0, StationKind::Ground, x, options);
    results.push_back({"M=1 ccdf x=" + format_number(x), analytic, mc.p_hat, 0.02,
                       std::abs(analytic - mc.p_hat) <= 0.02});
  }
  return results;
}

}  // namespace aerocov
