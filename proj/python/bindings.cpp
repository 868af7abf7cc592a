#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluorep/config.hpp"
#include "fluorep/csv.hpp"
#include "fluorep/exact.hpp"
#include "fluorep/montecarlo.hpp"
#include "fluorep/optimizer.hpp"
#include "fluorep/physics.hpp"
#include "fluorep/rates.hpp"
#include "fluorep/statesim.hpp"

namespace py = pybind11;
using namespace fluorep;

namespace {

py::object rational_to_fraction(const Rational& r) {
  py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(r.num, r.den);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate and protocol models for fluorescence-readout repeater chains";

  // ---- model ----------------------------------------------------------------

  py::enum_<Scheme>(m, "Scheme")
      .value("NewSingleRail", Scheme::NewSingleRail)
      .value("NewDualRail", Scheme::NewDualRail)
      .value("RefDlcz", Scheme::RefDlcz)
      .value("RefDualRail", Scheme::RefDualRail);

  py::enum_<FrequencyUnits>(m, "FrequencyUnits")
      .value("HzOver2Pi", FrequencyUnits::HzOver2Pi)
      .value("RadPerS", FrequencyUnits::RadPerS);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("gamma", &PhysicalParams::gamma)
      .def_readwrite("delta", &PhysicalParams::delta)
      .def_readwrite("beta", &PhysicalParams::beta)
      .def_readwrite("omega_p", &PhysicalParams::omega_p)
      .def_readwrite("omega_c", &PhysicalParams::omega_c)
      .def_readwrite("length_l", &PhysicalParams::length_l)
      .def_readwrite("depth_d", &PhysicalParams::depth_d)
      .def_readwrite("eta", &PhysicalParams::eta)
      .def_readwrite("n_atoms", &PhysicalParams::n_atoms);

  py::class_<LinkParams>(m, "LinkParams")
      .def(py::init<>())
      .def_readwrite("l0_km", &LinkParams::l0_km)
      .def_readwrite("latt_km", &LinkParams::latt_km)
      .def_readwrite("q", &LinkParams::q)
      .def_readwrite("eta_d", &LinkParams::eta_d)
      .def_readwrite("eta_f", &LinkParams::eta_f)
      .def_readwrite("n_photons", &LinkParams::n_photons);

  py::class_<ChainConfig>(m, "ChainConfig")
      .def(py::init<>())
      .def_readwrite("total_km", &ChainConfig::total_km)
      .def_readwrite("nesting_s", &ChainConfig::nesting_s)
      .def_readwrite("scheme", &ChainConfig::scheme)
      .def_readwrite("target_fidelity", &ChainConfig::target_fidelity)
      .def_readwrite("pir_enabled", &ChainConfig::pir_enabled)
      .def_readwrite("fiber_light_speed", &ChainConfig::fiber_light_speed);

  py::class_<RateResult>(m, "RateResult")
      .def(py::init<>())
      .def_readonly("rate_hz", &RateResult::rate_hz)
      .def_readonly("fidelity", &RateResult::fidelity)
      .def_readonly("error_budget", &RateResult::error_budget)
      .def_readonly("physical", &RateResult::physical)
      .def_readonly("link", &RateResult::link)
      .def_readonly("chain", &RateResult::chain);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("errors", &ValidationReport::errors)
      .def_readonly("warnings", &ValidationReport::warnings)
      .def("ok", &ValidationReport::ok);

  m.def("validate", &validate, py::arg("physical"), py::arg("link"), py::arg("chain"));
  m.def("scheme_name", &scheme_name);

  // ---- config ---------------------------------------------------------------

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<RatesKnobs>(m, "RatesKnobs")
      .def(py::init<>())
      .def_readwrite("kappa_m", &RatesKnobs::kappa_m)
      .def_readwrite("ref_c_r", &RatesKnobs::ref_c_r)
      .def_readwrite("ref_eta_d", &RatesKnobs::ref_eta_d);

  py::class_<OptimizerKnobs>(m, "OptimizerKnobs")
      .def(py::init<>())
      .def_readwrite("s_max", &OptimizerKnobs::s_max)
      .def_readwrite("co_optimize_pir", &OptimizerKnobs::co_optimize_pir);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("trials", &SimConfig::trials)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("max_attempt_cap", &SimConfig::max_attempt_cap)
      .def_readwrite("max_threads", &SimConfig::max_threads);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("units", &Config::units)
      .def_readwrite("physical", &Config::physical)
      .def_readwrite("link", &Config::link)
      .def_readwrite("chain", &Config::chain)
      .def_readwrite("rates", &Config::rates)
      .def_readwrite("optimizer", &Config::optimizer)
      .def_readwrite("sim", &Config::sim)
      .def_readonly("load_warnings", &Config::load_warnings);

  m.def("load_config", &load_config, py::arg("text"),
        "Parse a configuration from its text");
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("serialize_config", &serialize_config, py::arg("config"));

  // ---- physics --------------------------------------------------------------

  py::module_ physics = m.def_submodule("physics", "closed-form device physics");

  py::class_<PirResult>(physics, "PirResult")
      .def_readonly("t_min", &PirResult::t_min)
      .def_readonly("t_max", &PirResult::t_max)
      .def_readonly("t_chosen", &PirResult::t_chosen)
      .def_readonly("delta_loss", &PirResult::delta_loss)
      .def_readonly("suppression", &PirResult::suppression)
      .def_readonly("feasible", &PirResult::feasible);

  physics.def("fluorescence_rate", &fluorescence_rate, py::arg("gamma"), py::arg("omega_p"));
  physics.def("leak_rate", &leak_rate, py::arg("gamma"), py::arg("omega_p"),
              py::arg("beta"), py::arg("delta"));
  physics.def("dark_count_expectation", &dark_count_expectation, py::arg("physical"),
              py::arg("link"));
  physics.def("group_velocity", &group_velocity, py::arg("omega_c"), py::arg("length_l"),
              py::arg("gamma"), py::arg("depth_d"));
  physics.def("pir_window", &pir_window, py::arg("physical"), py::arg("margin"));
  physics.def(
      "pir_loss",
      [](double t_chosen, double v_g, double length_l) {
        return pir_loss(t_chosen, v_g, length_l);
      },
      py::arg("t_chosen"), py::arg("v_g"), py::arg("length_l"));
  physics.def("pir_suppression", &pir_suppression, py::arg("eta"), py::arg("delta_loss"),
              py::arg("depth_d"));
  physics.def("pir_cost_for_target", &pir_cost_for_target, py::arg("eta"),
              py::arg("depth_d"));
  physics.def("link_efficiency", &link_efficiency, py::arg("eta"), py::arg("eta_d"),
              py::arg("l0_km"), py::arg("latt_km"));
  physics.def(
      "mismatch_separable_prob",
      [](double beta, double eta_prime, long long n_atoms) {
        return mismatch_separable_prob(beta, eta_prime, n_atoms);
      },
      py::arg("beta"), py::arg("eta_prime"), py::arg("n_atoms"));
  physics.def("mismatch_expected_attempts", &mismatch_expected_attempts, py::arg("beta"),
              py::arg("eta_prime"), py::arg("q"));
  physics.def("swap_success_ideal", &swap_success_ideal, py::arg("n_atoms"));
  physics.def("generation_success_prob", &generation_success_prob, py::arg("q"),
              py::arg("eta"), py::arg("eta_d"), py::arg("l0_km"), py::arg("latt_km"));

  // ---- statesim -------------------------------------------------------------

  py::module_ ss = m.def_submodule("statesim", "truncated occupation-basis protocol model");

  py::enum_<Level>(ss, "Level").value("Blue", Level::Blue).value("Red", Level::Red);

  py::class_<StateVector>(ss, "StateVector")
      .def_static("vacuum", &StateVector::vacuum, py::arg("num_nodes"),
                  py::arg("n_max") = 2, py::arg("finite_n") = py::none())
      .def_property_readonly("num_nodes", &StateVector::num_nodes)
      .def_property_readonly("n_max", &StateVector::n_max)
      .def_property_readonly("finite_n", &StateVector::finite_n)
      .def_property_readonly("dim", &StateVector::dim)
      .def_property_readonly("truncated", &StateVector::truncated)
      .def("amplitude", &StateVector::amplitude, py::arg("occupations"))
      .def("norm", &StateVector::norm)
      .def("same_basis", &StateVector::same_basis)
      .def("scaled", &StateVector::scaled, py::arg("factor"))
      .def("added", &StateVector::added, py::arg("other"))
      .def("normalized", &StateVector::normalized)
      .def("amplitudes", &StateVector::amplitudes);

  py::class_<MeasurementLabel>(ss, "MeasurementLabel")
      .def_readonly("true_blue", &MeasurementLabel::true_blue)
      .def_readonly("true_red", &MeasurementLabel::true_red)
      .def_readonly("detected_blue", &MeasurementLabel::detected_blue)
      .def_readonly("detected_red", &MeasurementLabel::detected_red)
      .def_readonly("dark", &MeasurementLabel::dark)
      .def_readonly("phase_flip", &MeasurementLabel::phase_flip)
      .def("total_detected", &MeasurementLabel::total_detected);

  py::class_<MeasurementOutcome>(ss, "MeasurementOutcome")
      .def_readonly("label", &MeasurementOutcome::label)
      .def_readonly("probability", &MeasurementOutcome::probability)
      .def_readonly("post_state", &MeasurementOutcome::post_state);

  py::class_<NoisyLinkComponent>(ss, "NoisyLinkComponent")
      .def_readonly("weight", &NoisyLinkComponent::weight)
      .def_readonly("state", &NoisyLinkComponent::state)
      .def_readonly("incoherent_a", &NoisyLinkComponent::incoherent_a)
      .def_readonly("incoherent_b", &NoisyLinkComponent::incoherent_b);

  ss.def("create_spin_wave", &create_spin_wave, py::arg("state"), py::arg("node"),
         py::arg("level"));
  ss.def("prepare_link_ideal", &prepare_link_ideal, py::arg("state"), py::arg("node_a"),
         py::arg("node_b"), py::arg("level"));
  ss.def("prepare_link_noisy", &prepare_link_noisy, py::arg("state"), py::arg("node_a"),
         py::arg("node_b"), py::arg("level"), py::arg("q"), py::arg("eta"));
  ss.def("swap_rotation", &swap_rotation, py::arg("state"), py::arg("node"));
  ss.def("fluorescent_measure", &fluorescent_measure, py::arg("state"), py::arg("node"),
         py::arg("eta_f"), py::arg("dark_lambda"));
  ss.def("fidelity", &fidelity, py::arg("state"), py::arg("target"));
  ss.def("apply_level_phase", &apply_level_phase, py::arg("state"), py::arg("node"),
         py::arg("level"));
  ss.def(
      "brute_force_swap_success",
      [](int n_atoms) { return rational_to_fraction(brute_force_swap_success(n_atoms)); },
      py::arg("n_atoms"),
      "Exact single-excitation connection probability as a fractions.Fraction");

  // ---- rates ----------------------------------------------------------------

  py::module_ rates = m.def_submodule("rates", "scheme reduction and rate/fidelity models");

  py::class_<SchemeModel>(rates, "SchemeModel")
      .def(py::init<>())
      .def_readwrite("scheme", &SchemeModel::scheme)
      .def_readwrite("connection_efficiency", &SchemeModel::connection_efficiency)
      .def_readwrite("generation_prob", &SchemeModel::generation_prob)
      .def_readwrite("attempt_period", &SchemeModel::attempt_period)
      .def_readwrite("swap_base_prob", &SchemeModel::swap_base_prob)
      .def_readwrite("multi_scale", &SchemeModel::multi_scale)
      .def_readwrite("pir_delta", &SchemeModel::pir_delta);

  rates.def("build_scheme_model", &build_scheme_model, py::arg("chain"),
            py::arg("physical"), py::arg("link"), py::arg("knobs") = RatesKnobs{},
            py::arg("pir_delta_override") = py::none());
  rates.def("analytic_rate", &analytic_rate, py::arg("model"), py::arg("chain"));

  py::class_<FidelityBudget>(rates, "FidelityBudget")
      .def_readonly("fidelity", &FidelityBudget::fidelity)
      .def_readonly("budget", &FidelityBudget::budget);

  rates.def("fidelity_budget", &fidelity_budget, py::arg("model"), py::arg("chain"),
            py::arg("physical"), py::arg("link"), py::arg("knobs") = RatesKnobs{});

  py::class_<MaxQResult>(rates, "MaxQResult")
      .def_readonly("q", &MaxQResult::q)
      .def_readonly("reachable", &MaxQResult::reachable);

  rates.def("max_q_for_fidelity", &max_q_for_fidelity, py::arg("chain"),
            py::arg("physical"), py::arg("link_template"), py::arg("target_fidelity"),
            py::arg("knobs") = RatesKnobs{});

  // ---- montecarlo -----------------------------------------------------------

  py::module_ mc = m.def_submodule("montecarlo", "waiting-time sampling and exact oracle");

  py::register_exception<CapExceededError>(mc, "CapExceededError", PyExc_RuntimeError);

  py::class_<SimEstimate>(mc, "SimEstimate")
      .def_readonly("mean_time_s", &SimEstimate::mean_time_s)
      .def_readonly("std_error_s", &SimEstimate::std_error_s)
      .def_readonly("rate_hz", &SimEstimate::rate_hz)
      .def_readonly("success_fraction", &SimEstimate::success_fraction);

  mc.def("simulate_chain", &simulate_chain, py::arg("model"), py::arg("chain"),
         py::arg("sim"), py::call_guard<py::gil_scoped_release>());
  mc.def("exact_two_link_expectation", &exact_two_link_expectation, py::arg("p0"),
         py::arg("p_swap"), py::arg("attempt_period"));

  // ---- optimizer ------------------------------------------------------------

  py::module_ opt = m.def_submodule("optimizer", "distance/scheme search");

  py::class_<GridPoint>(opt, "GridPoint")
      .def_readonly("nesting_s", &GridPoint::nesting_s)
      .def_readonly("q", &GridPoint::q)
      .def_readonly("rate_hz", &GridPoint::rate_hz)
      .def_readonly("fidelity", &GridPoint::fidelity)
      .def_readonly("feasible", &GridPoint::feasible);

  py::class_<OptimizationResult>(opt, "OptimizationResult")
      .def_readonly("best", &OptimizationResult::best)
      .def_readonly("grid_trace", &OptimizationResult::grid_trace)
      .def_readonly("feasible", &OptimizationResult::feasible);

  opt.def("optimize_at_distance", &optimize_at_distance, py::arg("total_km"),
          py::arg("scheme"), py::arg("target_fidelity"), py::arg("base"),
          py::call_guard<py::gil_scoped_release>());

  py::class_<SchemePoint>(opt, "SchemePoint")
      .def_readonly("rate_hz", &SchemePoint::rate_hz)
      .def_readonly("segments", &SchemePoint::segments)
      .def_readonly("q", &SchemePoint::q)
      .def_readonly("feasible", &SchemePoint::feasible);

  py::class_<SweepRow>(opt, "SweepRow")
      .def_readonly("distance_km", &SweepRow::distance_km)
      .def_readonly("new_single", &SweepRow::new_single)
      .def_readonly("new_dual", &SweepRow::new_dual)
      .def_readonly("ref_dlcz", &SweepRow::ref_dlcz)
      .def_readonly("ref_dual", &SweepRow::ref_dual)
      .def_readonly("ratio_single", &SweepRow::ratio_single)
      .def_readonly("ratio_dual", &SweepRow::ratio_dual);

  py::class_<SweepTable>(opt, "SweepTable").def_readonly("rows", &SweepTable::rows);

  opt.def("sweep_distances", &sweep_distances, py::arg("dmin_km"), py::arg("dmax_km"),
          py::arg("points"), py::arg("base"), py::arg("max_threads") = 0,
          py::call_guard<py::gil_scoped_release>());

  // ---- csv ------------------------------------------------------------------

  m.def("format_g9", &format_g9, py::arg("value"));
  m.def(
      "sweep_csv", [](const SweepTable& t) { return to_csv(sweep_to_csv(t)); },
      py::arg("table"), "Render a sweep table to its CSV byte contract");
}
