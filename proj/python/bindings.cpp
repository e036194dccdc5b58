#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "aerocov/analytic.hpp"
#include "aerocov/channel.hpp"
#include "aerocov/experiment.hpp"

namespace py = pybind11;
using namespace aerocov;

namespace {

SimulationOptions make_options(std::size_t snapshots, std::uint64_t seed, std::optional<double> radius,
                               unsigned threads) {
  SimulationOptions o;
  o.n_snapshots = snapshots;
  o.rng.master_seed = seed;
  o.radius = radius;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(aerocov, m) {
  m.doc() = "Coverage bound and Monte Carlo simulation for aerial-terrestrial HetNets.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<StationKind>(m, "StationKind")
      .value("Ground", StationKind::Ground)
      .value("Aerial", StationKind::Aerial);
  py::enum_<LinkKind>(m, "LinkKind").value("Los", LinkKind::Los).value("Nlos", LinkKind::Nlos);

  py::class_<EnvironmentPreset>(m, "EnvironmentPreset")
      .def_property_readonly("name", [](const EnvironmentPreset& e) { return std::string(to_string(e.name)); })
      .def_readwrite("a_env", &EnvironmentPreset::a_env)
      .def_readwrite("b_env", &EnvironmentPreset::b_env)
      .def("__repr__", [](const EnvironmentPreset& e) {
        return "EnvironmentPreset(" + std::string(to_string(e.name)) + ", " + format_number(e.a_env) +
               ", " + format_number(e.b_env) + ")";
      });

  py::class_<FadingShapes>(m, "FadingShapes")
      .def(py::init<>())
      .def_readwrite("m_los_ground", &FadingShapes::m_los_ground)
      .def_readwrite("m_nlos_ground", &FadingShapes::m_nlos_ground)
      .def_readwrite("m_los_aerial", &FadingShapes::m_los_aerial)
      .def_readwrite("m_nlos_aerial", &FadingShapes::m_nlos_aerial);

  py::class_<TierParams>(m, "TierParams")
      .def(py::init<>())
      .def_readwrite("density", &TierParams::density, "stations per square meter")
      .def_readwrite("power", &TierParams::power)
      .def_readwrite("sir_threshold", &TierParams::sir_threshold)
      .def_readwrite("aerial_fraction", &TierParams::aerial_fraction)
      .def_readwrite("altitude", &TierParams::altitude)
      .def_readwrite("d0", &TierParams::d0)
      .def_readwrite("d1", &TierParams::d1)
      .def_readwrite("alpha_los", &TierParams::alpha_los)
      .def_readwrite("alpha_nlos", &TierParams::alpha_nlos)
      .def_readwrite("intercept_los_ground", &TierParams::intercept_los_ground)
      .def_readwrite("intercept_nlos_ground", &TierParams::intercept_nlos_ground)
      .def_readwrite("intercept_los_aerial", &TierParams::intercept_los_aerial)
      .def_readwrite("intercept_nlos_aerial", &TierParams::intercept_nlos_aerial)
      .def_readwrite("fading", &TierParams::fading);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("tiers", &NetworkConfig::tiers)
      .def_readwrite("environment", &NetworkConfig::environment)
      .def_readwrite("region_radius", &NetworkConfig::region_radius)
      .def_readwrite("paper_verbatim", &NetworkConfig::verbatim_formulas)
      .def_readwrite("clamp_bound", &NetworkConfig::clamp_bound)
      .def_readwrite("far_field", &NetworkConfig::far_field);

  py::class_<CoverageBound>(m, "CoverageBound")
      .def_readonly("components", &CoverageBound::components)
      .def_readonly("total_raw", &CoverageBound::total_raw)
      .def_readonly("total", &CoverageBound::total);

  py::class_<CoverageEstimate>(m, "CoverageEstimate")
      .def_readonly("p_hat", &CoverageEstimate::p_hat)
      .def_readonly("ci_halfwidth", &CoverageEstimate::ci_halfwidth)
      .def_readonly("n_snapshots", &CoverageEstimate::n_snapshots)
      .def_readonly("breakdown", &CoverageEstimate::breakdown);

  py::class_<MeanEstimate>(m, "MeanEstimate")
      .def_readonly("mean", &MeanEstimate::mean)
      .def_readonly("ci_halfwidth", &MeanEstimate::ci_halfwidth)
      .def_readonly("n", &MeanEstimate::n);

  m.def("environment_preset", py::overload_cast<std::string_view>(&environment_preset), py::arg("name"));
  m.def("validate_config", &validate_config, py::arg("cfg"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", [](const std::string& text) { return parse_experiment(text).network; },
        py::arg("json_text"), "Parse and validate a JSON configuration string.");

  m.def("g2g_path_loss", &g2g_path_loss, py::arg("d"), py::arg("intercept"), py::arg("alpha"));
  m.def("a2g_path_loss", &a2g_path_loss, py::arg("d"), py::arg("h"), py::arg("intercept"), py::arg("alpha"));
  m.def("los_prob_g2g", &los_prob_g2g, py::arg("d"), py::arg("d0"), py::arg("d1"));
  m.def("los_prob_a2g", &los_prob_a2g, py::arg("d"), py::arg("h"), py::arg("env"));
  m.def("alzer_coeff", &alzer_coeff, py::arg("m"));

  m.def("integrate_semi_infinite",
        [](const std::function<double(double)>& f, double rel_tol, double abs_tol) {
          const QuadResult r = integrate_semi_infinite(f, rel_tol, abs_tol);
          return py::make_tuple(r.value, r.error);
        },
        py::arg("f"), py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-12);

  m.def("laplace_exponent", &laplace_exponent, py::arg("t"), py::arg("tier_index"), py::arg("kind"),
        py::arg("cfg"));
  m.def("laplace_interference", &laplace_interference, py::arg("t"), py::arg("cfg"));
  m.def("conditional_sir_ccdf", &conditional_sir_ccdf, py::arg("x"), py::arg("tier_index"),
        py::arg("kind"), py::arg("cfg"));
  m.def("coverage_bound_total", &coverage_bound_total, py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());

  m.def("resolve_radius", &resolve_radius, py::arg("cfg"));
  m.def("estimate_coverage_mc",
        [](const NetworkConfig& cfg, std::size_t snapshots, std::uint64_t seed, std::optional<double> radius,
           unsigned threads) {
          return estimate_coverage_mc(cfg, make_options(snapshots, seed, radius, threads));
        },
        py::arg("cfg"), py::arg("n_snapshots"), py::arg("seed") = 1, py::arg("radius") = py::none(),
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("estimate_interference_ccdf",
        [](const NetworkConfig& cfg, const std::vector<double>& thresholds, std::size_t snapshots,
           std::uint64_t seed) {
          return estimate_interference_ccdf(cfg, thresholds, make_options(snapshots, seed, std::nullopt, 0));
        },
        py::arg("cfg"), py::arg("thresholds"), py::arg("n_snapshots"), py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("estimate_laplace_mc",
        [](double t, const NetworkConfig& cfg, std::size_t snapshots, std::uint64_t seed) {
          return estimate_laplace_mc(t, cfg, make_options(snapshots, seed, std::nullopt, 0));
        },
        py::arg("t"), py::arg("cfg"), py::arg("n_snapshots"), py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.def("run_sweep_csv",
        [](const NetworkConfig& cfg, const std::string& axis, const std::vector<double>& grid,
           std::size_t tier, bool analytic, bool montecarlo, std::size_t snapshots, std::uint64_t seed,
           const std::string& density_unit) {
          SweepSpec spec;
          spec.axis = parse_sweep_axis(axis);
          spec.grid = grid;
          spec.tier_index = tier;
          spec.modes = {analytic, montecarlo};
          spec.mc_snapshots = snapshots;
          spec.master_seed = seed;
          spec.density_unit =
              density_unit == "per_m2" ? DensityUnit::PerSquareMeter : DensityUnit::PerSquareKilometer;
          py::gil_scoped_release release;
          return csv_text(run_sweep(cfg, spec));
        },
        py::arg("cfg"), py::arg("axis"), py::arg("grid"), py::arg("tier") = 0, py::arg("analytic") = true,
        py::arg("montecarlo") = true, py::arg("n_snapshots") = 10000, py::arg("seed") = 1,
        py::arg("density_unit") = "per_km2",
        "Run a sweep and return the CSV text (same schema as the CLI).");
}
