#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lerrw/environment.hpp"
#include "lerrw/error.hpp"
#include "lerrw/experiments.hpp"
#include "lerrw/resistance.hpp"
#include "lerrw/special_functions.hpp"
#include "lerrw/walk.hpp"
#include "lerrw/weights.hpp"

namespace py = pybind11;
using namespace lerrw;

namespace {

// Runs an experiment from its JSON config and returns (csv text, summary
// JSON text); the Python side parses the JSON.
std::pair<std::string, std::string> run_experiment_json(const std::string& config_text,
                                                        unsigned threads) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto config = config_from_json(j);
  config.threads = threads;
  config.validate();
  std::ostringstream csv;
  nlohmann::json summary;
  py::gil_scoped_release release;
  switch (config.mode) {
    case ExperimentMode::ReinforcedScaling: {
      const auto r = run_reinforced_scaling(config);
      write_scaling_csv(csv, r);
      summary = scaling_summary(r);
      break;
    }
    case ExperimentMode::Alpha1Scaling: {
      const auto r = run_alpha1_scaling(config);
      write_scaling_csv(csv, r);
      summary = scaling_summary(r);
      break;
    }
    case ExperimentMode::UnreinforcedScaling: {
      const auto r = run_unreinforced_scaling(config);
      write_scaling_csv(csv, r);
      summary = scaling_summary(r);
      break;
    }
    case ExperimentMode::HittingTime: {
      const auto r = run_hitting_time_suite(config);
      write_hitting_csv(csv, r);
      summary = hitting_summary(r);
      break;
    }
    case ExperimentMode::SllnCheck: {
      const auto r = run_slln_check(config);
      write_slln_csv(csv, r);
      summary = slln_summary(r);
      break;
    }
    case ExperimentMode::OracleSuite: {
      const auto r = run_oracle_suite(config.max_len, default_oracle_grid(), threads);
      write_oracle_csv(csv, r);
      summary = oracle_summary(r);
      break;
    }
  }
  return {csv.str(), summary.dump()};
}

WeightSequence weights_from_list(const std::vector<double>& w) {
  return WeightSequence::from_weights(w);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linearly edge-reinforced random walks on the half-line";
  m.attr("__version__") = LERRW_VERSION;

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NoRegimeError>(m, "NoRegimeError", config_error.ptr());
  py::register_exception<InvalidPathError>(m, "InvalidPathError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);

  py::enum_<Family>(m, "Family")
      .value("LogPoly", Family::LogPoly)
      .value("TakeiPoly", Family::TakeiPoly);

  py::class_<WeightProfile>(m, "WeightProfile")
      .def(py::init<Family, double, double, double>(), py::arg("family"), py::arg("alpha"),
           py::arg("beta"), py::arg("delta"))
      .def_static("log_poly", &WeightProfile::log_poly, py::arg("alpha"), py::arg("beta"),
                  py::arg("delta"))
      .def_static("takei", &WeightProfile::takei, py::arg("alpha"), py::arg("delta"))
      .def_property_readonly("family", &WeightProfile::family)
      .def_property_readonly("alpha", &WeightProfile::alpha)
      .def_property_readonly("beta", &WeightProfile::beta)
      .def_property_readonly("delta", &WeightProfile::delta)
      .def("initial_weight", &WeightProfile::initial_weight, py::arg("x"))
      .def("with_delta", &WeightProfile::with_delta, py::arg("delta"))
      .def("__eq__", [](const WeightProfile& a, const WeightProfile& b) { return a == b; })
      .def("__repr__", &WeightProfile::describe);

  m.def(
      "classify",
      [](const WeightProfile& p) { return std::string(to_string(classify_recurrence(p).verdict)); },
      py::arg("profile"), "\"recurrent\" or \"transient\".");
  m.def("phi0_partial_sum", &phi0_partial_sum, py::arg("profile"), py::arg("n"));

  m.def("digamma", &digamma, py::arg("z"));
  m.def("trigamma", &trigamma, py::arg("z"));
  m.def("log_beta", &log_beta, py::arg("a"), py::arg("b"));
  m.def("digamma_half_step", &digamma_half_step, py::arg("z"));
  m.def(
      "digamma_difference_bounds",
      [](double y, double z) {
        const auto s = digamma_difference_bounds(y, z);
        return py::make_tuple(s.lower, s.value, s.upper);
      },
      py::arg("y"), py::arg("z"), "(lower, psi(y) - psi(z), upper).");
  m.def("mean_S", &mean_S, py::arg("profile"), py::arg("x"));
  m.def("mean_S_regrouped", &mean_S_regrouped, py::arg("profile"), py::arg("x"));
  m.def("var_S", &var_S, py::arg("profile"), py::arg("x"));
  m.def("k_constant", &k_constant, py::arg("profile"));
  m.def(
      "limsup_predictor",
      [](const WeightProfile& p, double n, double epsilon) {
        return RegimePredictor(p, PredictorTarget::LimsupScale, epsilon)(n);
      },
      py::arg("profile"), py::arg("n"), py::arg("epsilon") = 0.3);

  m.def(
      "expected_hitting_time",
      [](const std::vector<double>& w, std::uint64_t x) {
        return expected_hitting_time(weights_from_list(w), x);
      },
      py::arg("weights"), py::arg("x"));
  m.def(
      "hitting_times",
      [](const std::vector<double>& w) { return build_resistance_profile(weights_from_list(w)).t; },
      py::arg("weights"), "T(0..len(weights)) for the fixed-weight walk.");

  m.def(
      "path_probability",
      [](const WeightProfile& p, const std::vector<std::int64_t>& path) {
        return path_probability(p, path);
      },
      py::arg("profile"), py::arg("path"));
  m.def(
      "annealed_path_probability",
      [](const WeightProfile& p, const std::vector<std::int64_t>& path) {
        return annealed_path_probability(p, path);
      },
      py::arg("profile"), py::arg("path"));
  m.def("distribution_of_position", &distribution_of_position, py::arg("profile"),
        py::arg("n"), py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "simulate_max",
      [](const WeightProfile& p, std::uint64_t n_steps, std::uint64_t seed) {
        RandomStream rng(seed);
        const auto s = simulate(p, n_steps, CheckpointSchedule::explicit_points({}), {}, rng);
        return py::make_tuple(s.final_position, s.final_max);
      },
      py::arg("profile"), py::arg("n_steps"), py::arg("seed"),
      "(X_n, M_n) after n_steps steps from 0.");

  m.def(
      "sample_environment",
      [](const WeightProfile& p, std::uint64_t x_max, std::uint64_t seed) {
        const auto env = sample_environment(p, x_max, seed);
        py::dict d;
        d["p"] = env.p;
        d["S"] = env.log_s;
        return d;
      },
      py::arg("profile"), py::arg("x_max"), py::arg("seed"),
      "Dict with p and S indexed by site (site 0 is the origin).");
  m.def(
      "s_statistics",
      [](const WeightProfile& p, std::uint64_t x, std::uint64_t n_envs, std::uint64_t seed,
         unsigned threads) {
        const auto st = [&] {
          py::gil_scoped_release release;
          return s_statistics(p, x, n_envs, seed, threads);
        }();
        py::dict d;
        d["sample_mean"] = st.sample_mean;
        d["sample_var"] = st.sample_var;
        d["mean_se"] = st.mean_se;
        d["var_se"] = st.var_se;
        d["mean_S"] = st.mean_S;
        d["var_S"] = st.var_S;
        d["slln_ratio"] = st.slln_ratio;
        return d;
      },
      py::arg("profile"), py::arg("x"), py::arg("n_envs"), py::arg("master_seed"),
      py::arg("threads") = 1);

  m.def("_run_experiment", &run_experiment_json, py::arg("config_json"),
        py::arg("threads") = 1);
}
