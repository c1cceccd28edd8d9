// Python bindings for the swap-engine statistics library.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qoswap/analysis.hpp"
#include "qoswap/engine.hpp"
#include "qoswap/finite_time.hpp"
#include "qoswap/spectral.hpp"
#include "qoswap/tpm.hpp"

namespace py = pybind11;
using namespace qoswap;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Exact statistics of a two-qudit swap engine: moments, joint "
        "work-heat distribution, fluctuation identities, uncertainty-ratio "
        "diagnostics, a validation sampler, and finite-time limit cycles.";

    py::enum_<Regime>(m, "Regime")
        .value("HEAT_ENGINE", Regime::HeatEngine)
        .value("REFRIGERATOR", Regime::Refrigerator)
        .value("THERMAL_ACCELERATOR", Regime::ThermalAccelerator)
        .value("BOUNDARY", Regime::Boundary);
    m.def("regime_name", &to_string, py::arg("regime"),
          "Lower-case hyphenated name of an operating regime.");

    py::class_<EngineParams>(m, "EngineParams")
        .def(py::init([](int d, double omega_a, double omega_b, double beta_a,
                         double beta_b, double theta) {
                 EngineParams p{d, omega_a, omega_b, beta_a, beta_b, theta};
                 p.validate();
                 return p;
             }),
             py::arg("d") = 2, py::arg("omega_a") = 1.0, py::arg("omega_b") = 1.0,
             py::arg("beta_a") = 1.0, py::arg("beta_b") = 1.0,
             py::arg("theta") = 1.5707963267948966)
        .def_readwrite("d", &EngineParams::d)
        .def_readwrite("omega_a", &EngineParams::omega_a)
        .def_readwrite("omega_b", &EngineParams::omega_b)
        .def_readwrite("beta_a", &EngineParams::beta_a)
        .def_readwrite("beta_b", &EngineParams::beta_b)
        .def_readwrite("theta", &EngineParams::theta)
        .def("x_a", &EngineParams::xa, "beta_a * omega_a")
        .def("x_b", &EngineParams::xb, "beta_b * omega_b")
        .def("swap_weight", &EngineParams::swap_weight, "sin^2(theta)")
        .def("validate", &EngineParams::validate)
        .def("__repr__", [](const EngineParams& p) {
            return "EngineParams(d=" + std::to_string(p.d) +
                   ", omega_a=" + std::to_string(p.omega_a) +
                   ", omega_b=" + std::to_string(p.omega_b) +
                   ", beta_a=" + std::to_string(p.beta_a) +
                   ", beta_b=" + std::to_string(p.beta_b) +
                   ", theta=" + std::to_string(p.theta) + ")";
        });

    m.def("partition_function", &partition_function, py::arg("x"), py::arg("d"));
    m.def("mean_occupation", &mean_occupation, py::arg("x"), py::arg("d"),
          "Thermal mean level index at dimensionless inverse temperature x.");
    m.def("occupation_variance", &occupation_variance, py::arg("x"), py::arg("d"));
    m.def("mean_occupation_inverse", &mean_occupation_inverse, py::arg("n"),
          py::arg("d"), "x such that mean_occupation(x, d) = n.");

    py::class_<MomentSet>(m, "MomentSet")
        .def_readonly("mean_w", &MomentSet::mean_w)
        .def_readonly("mean_qh", &MomentSet::mean_qh)
        .def_readonly("mean_qc", &MomentSet::mean_qc)
        .def_readonly("second_w", &MomentSet::second_w)
        .def_readonly("second_qh", &MomentSet::second_qh)
        .def_readonly("var_w", &MomentSet::var_w)
        .def_readonly("var_qh", &MomentSet::var_qh)
        .def_readonly("cov_w_qh", &MomentSet::cov_w_qh)
        .def_readonly("entropy_production", &MomentSet::entropy_production)
        .def_readonly("regime", &MomentSet::regime);
    m.def("moments", &moments, py::arg("params"),
          "All first and second moments of (W, Q_H) plus entropy production "
          "and the operating regime, from the closed forms.");

    m.def("entropy_production", &entropy_production, py::arg("params"));
    m.def("classify_regime", &classify_regime, py::arg("params"),
          py::arg("rel_tol") = 1e-9);

    py::class_<EfficiencyResult>(m, "EfficiencyResult")
        .def_readonly("value", &EfficiencyResult::value)
        .def_readonly("regime_ok", &EfficiencyResult::regime_ok);
    m.def("otto_efficiency", &otto_efficiency, py::arg("params"),
          "1 - omega_b/omega_a, flagged with heat-engine regime membership.");
    m.def("otto_cop", &otto_cop, py::arg("params"));
    m.def("carnot_efficiency", &carnot_efficiency, py::arg("params"));
    m.def("carnot_cop", &carnot_cop, py::arg("params"));
    m.def("curzon_ahlborn_efficiency", &curzon_ahlborn_efficiency,
          py::arg("params"));

    // --- spectral statistics ---
    m.def("characteristic_function", &spectral::characteristic_function,
          py::arg("params"), py::arg("lam"), py::arg("mu"),
          "Two-variable characteristic function of (W, Q_H); complex "
          "arguments give the tilted/analytically continued values.");
    m.def("snr_identity_rhs", &spectral::snr_identity_rhs, py::arg("params"),
          "Entropy-production form of var(W)/<W>^2.");

    py::class_<spectral::WorkHeatDistribution>(m, "WorkHeatDistribution")
        .def_readonly("d", &spectral::WorkHeatDistribution::d)
        .def_readonly("omega_a", &spectral::WorkHeatDistribution::omega_a)
        .def_readonly("omega_b", &spectral::WorkHeatDistribution::omega_b)
        .def_readonly("probabilities",
                      &spectral::WorkHeatDistribution::probabilities)
        .def("min_n", &spectral::WorkHeatDistribution::min_n)
        .def("max_n", &spectral::WorkHeatDistribution::max_n)
        .def("prob", &spectral::WorkHeatDistribution::prob, py::arg("n"))
        .def("work", &spectral::WorkHeatDistribution::work, py::arg("n"))
        .def("heat_hot", &spectral::WorkHeatDistribution::heat_hot, py::arg("n"))
        .def("heat_cold", &spectral::WorkHeatDistribution::heat_cold,
             py::arg("n"))
        .def("total", &spectral::WorkHeatDistribution::total)
        .def("moment", &spectral::WorkHeatDistribution::moment, py::arg("l"),
             py::arg("s"), "sum_n p(n) W(n)^l Q_H(n)^s");
    m.def("joint_distribution", &spectral::joint_distribution, py::arg("params"),
          "Closed-form joint (W, Q_H) distribution on the exchange lattice.");

    py::class_<spectral::DetailedFtReport>(m, "DetailedFtReport")
        .def_readonly("max_abs_residual",
                      &spectral::DetailedFtReport::max_abs_residual)
        .def_readonly("pairs_checked", &spectral::DetailedFtReport::pairs_checked)
        .def_readonly("pairs_below_floor",
                      &spectral::DetailedFtReport::pairs_below_floor);
    m.def("verify_detailed_ft", &spectral::verify_detailed_ft, py::arg("params"),
          py::arg("floor") = 1e-300,
          "Residuals of log[p(n)/p(-n)] = (x_b - x_a) n over the lattice.");

    py::class_<spectral::EfficiencyFluctuationReport>(
        m, "EfficiencyFluctuationReport")
        .def_readonly("nonfluctuating",
                      &spectral::EfficiencyFluctuationReport::nonfluctuating)
        .def_readonly("efficiency",
                      &spectral::EfficiencyFluctuationReport::efficiency)
        .def_readonly("max_abs_deviation",
                      &spectral::EfficiencyFluctuationReport::max_abs_deviation);
    m.def("efficiency_is_nonfluctuating", &spectral::efficiency_is_nonfluctuating,
          py::arg("params"));

    // --- uncertainty-ratio diagnostics and optimization ---
    py::class_<analysis::TurCheck>(m, "TurCheck")
        .def_readonly("lhs", &analysis::TurCheck::lhs)
        .def_readonly("rhs_bound", &analysis::TurCheck::rhs_bound)
        .def_readonly("rhs_standard", &analysis::TurCheck::rhs_standard)
        .def_readonly("ratio", &analysis::TurCheck::ratio)
        .def_readonly("entropy_production",
                      &analysis::TurCheck::entropy_production)
        .def_readonly("bound_ok", &analysis::TurCheck::bound_ok)
        .def_readonly("standard_violated", &analysis::TurCheck::standard_violated);
    m.def("tur_bound_check", &analysis::tur_bound_check, py::arg("params"),
          py::arg("tol") = 1e-10,
          "var(W)/<W>^2 against the engine bound 2/Sigma - 1 and the "
          "standard bound 2/Sigma.");
    m.def("ultimate_snr_limit", &analysis::ultimate_snr_limit, py::arg("d"),
          py::arg("theta"),
          "Dimension limit of var(W)/<W>^2 at extreme temperature separation.");

    py::class_<analysis::MaxWorkResult>(m, "MaxWorkResult")
        .def_readonly("d", &analysis::MaxWorkResult::d)
        .def_readonly("tb_over_ta", &analysis::MaxWorkResult::tb_over_ta)
        .def_readonly("eta_m", &analysis::MaxWorkResult::eta_m)
        .def_readonly("eta_ca", &analysis::MaxWorkResult::eta_ca)
        .def_readonly("eta_carnot", &analysis::MaxWorkResult::eta_carnot)
        .def_readonly("x_opt", &analysis::MaxWorkResult::x_opt)
        .def_readonly("w_max", &analysis::MaxWorkResult::w_max)
        .def_readonly("converged", &analysis::MaxWorkResult::converged);
    m.def("efficiency_at_max_work", &analysis::efficiency_at_max_work,
          py::arg("d"), py::arg("tb_over_ta"),
          py::arg("theta") = 1.5707963267948966,
          "Efficiency at the work-maximizing cold frequency.");

    py::class_<analysis::ViolationSearch>(m, "ViolationSearch")
        .def_readonly("x_a_pin", &analysis::ViolationSearch::x_a_pin)
        .def_readonly("x_b_opt", &analysis::ViolationSearch::x_b_opt)
        .def_readonly("ratio_min", &analysis::ViolationSearch::ratio_min)
        .def_readonly("converged", &analysis::ViolationSearch::converged);
    m.def("strongest_standard_violation", &analysis::strongest_standard_violation,
          py::arg("d"), py::arg("theta"), py::arg("x_a_pin") = 1e-4,
          py::arg("lo") = 0.5, py::arg("hi") = 5.0);

    // --- validation sampler ---
    py::class_<tpm::EmpiricalStats>(m, "EmpiricalStats")
        .def_readonly("count", &tpm::EmpiricalStats::count)
        .def_readonly("d", &tpm::EmpiricalStats::d)
        .def_readonly("lattice_counts", &tpm::EmpiricalStats::lattice_counts)
        .def("prob", &tpm::EmpiricalStats::prob, py::arg("n"))
        .def_readonly("mean_w", &tpm::EmpiricalStats::mean_w)
        .def_readonly("sem_w", &tpm::EmpiricalStats::sem_w)
        .def_readonly("mean_qh", &tpm::EmpiricalStats::mean_qh)
        .def_readonly("sem_qh", &tpm::EmpiricalStats::sem_qh)
        .def_readonly("second_w", &tpm::EmpiricalStats::second_w)
        .def_readonly("sem_second_w", &tpm::EmpiricalStats::sem_second_w)
        .def_readonly("jarzynski", &tpm::EmpiricalStats::jarzynski)
        .def_readonly("sem_jarzynski", &tpm::EmpiricalStats::sem_jarzynski);
    m.def("enumerate_joint", &tpm::enumerate_joint, py::arg("params"),
          "Exhaustive two-point-measurement enumeration (d <= 64).");
    m.def("sample", &tpm::sample, py::arg("params"), py::arg("count"),
          py::arg("seed"), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Deterministic seeded sampler; identical histogram for any jobs.");
    m.def("transition_probability", &tpm::transition_probability,
          py::arg("params"), py::arg("l"), py::arg("s"), py::arg("n"),
          py::arg("m"));

    // --- finite-time limit cycle ---
    py::class_<finite_time::FiniteTimeParams>(m, "FiniteTimeParams")
        .def(py::init([](EngineParams engine, double alpha_a, double alpha_b,
                         double tau_q, double tau_w) {
                 finite_time::FiniteTimeParams p;
                 p.engine = engine;
                 p.alpha_a = alpha_a;
                 p.alpha_b = alpha_b;
                 p.tau_q = tau_q;
                 p.tau_w = tau_w;
                 p.validate();
                 return p;
             }),
             py::arg("engine"), py::arg("alpha_a") = 1.0,
             py::arg("alpha_b") = 1.0, py::arg("tau_q") = 1.0,
             py::arg("tau_w") = 0.0)
        .def_readwrite("engine", &finite_time::FiniteTimeParams::engine)
        .def_readwrite("alpha_a", &finite_time::FiniteTimeParams::alpha_a)
        .def_readwrite("alpha_b", &finite_time::FiniteTimeParams::alpha_b)
        .def_readwrite("tau_q", &finite_time::FiniteTimeParams::tau_q)
        .def_readwrite("tau_w", &finite_time::FiniteTimeParams::tau_w)
        .def("validate", &finite_time::FiniteTimeParams::validate);

    py::class_<finite_time::SteadyState>(m, "SteadyState")
        .def_readonly("n_a_star", &finite_time::SteadyState::n_a_star)
        .def_readonly("n_b_star", &finite_time::SteadyState::n_b_star)
        .def_readonly("x_a_star", &finite_time::SteadyState::x_a_star)
        .def_readonly("x_b_star", &finite_time::SteadyState::x_b_star)
        .def_readonly("beta_a_star", &finite_time::SteadyState::beta_a_star)
        .def_readonly("beta_b_star", &finite_time::SteadyState::beta_b_star)
        .def_readonly("degenerate_tau", &finite_time::SteadyState::degenerate_tau)
        .def_readonly("beta_capped", &finite_time::SteadyState::beta_capped);
    m.def("steady_state", &finite_time::steady_state, py::arg("params"),
          "Limit-cycle occupations after the thermalization strokes.");

    py::class_<finite_time::SteadyMoments>(m, "SteadyMoments")
        .def_readonly("state", &finite_time::SteadyMoments::state)
        .def_readonly("at_star", &finite_time::SteadyMoments::at_star)
        .def_readonly("entropy_production_bath",
                      &finite_time::SteadyMoments::entropy_production_bath)
        .def_readonly("entropy_production_internal",
                      &finite_time::SteadyMoments::entropy_production_internal)
        .def_readonly("power", &finite_time::SteadyMoments::power);
    m.def("steady_moments", &finite_time::steady_moments, py::arg("params"));

    m.def("power", &finite_time::power, py::arg("params"),
          "Extracted work per unit total cycle time in the limit cycle.");
    m.def("power_zero_stroke_limit", &finite_time::power_zero_stroke_limit,
          py::arg("params"));

    py::class_<finite_time::OptimalPower>(m, "OptimalPower")
        .def_readonly("tau_q_opt", &finite_time::OptimalPower::tau_q_opt)
        .def_readonly("p_opt", &finite_time::OptimalPower::p_opt)
        .def_readonly("boundary", &finite_time::OptimalPower::boundary)
        .def_readonly("converged", &finite_time::OptimalPower::converged);
    m.def("optimal_power", &finite_time::optimal_power, py::arg("params"),
          "Golden-section optimum of power over tau_q at fixed tau_w.");
}
