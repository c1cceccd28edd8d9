#include "qoswap/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "detail_math.hpp"

namespace qoswap {

namespace {

void require_levels(int d, const char* fn) {
    if (d < 2)
        throw std::domain_error(std::string(fn) + ": d must be >= 2");
}

void require_positive_x(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(fn) +
                                ": beta*omega must be positive and finite");
}

// sin^2(theta) (N_A - N_B): the common factor of every first moment.
double swap_times_occupation_gap(const EngineParams& p) {
    return p.swap_weight() *
           (detail::occupation_kernel(p.xa(), p.d) -
            detail::occupation_kernel(p.xb(), p.d));
}

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::HeatEngine: return "heat-engine";
        case Regime::Refrigerator: return "refrigerator";
        case Regime::ThermalAccelerator: return "thermal-accelerator";
        case Regime::Boundary: return "boundary";
    }
    return "unknown";
}

double EngineParams::swap_weight() const {
    double s = std::sin(theta);
    return s * s;
}

void EngineParams::validate() const {
    if (d < 2) throw std::invalid_argument("EngineParams: d must be >= 2");
    if (!(omega_a > 0.0) || !std::isfinite(omega_a))
        throw std::invalid_argument("EngineParams: omega_a must be positive and finite");
    if (!(omega_b > 0.0) || !std::isfinite(omega_b))
        throw std::invalid_argument("EngineParams: omega_b must be positive and finite");
    if (!(beta_a > 0.0) || !std::isfinite(beta_a))
        throw std::invalid_argument("EngineParams: beta_a must be positive and finite");
    if (!(beta_b > 0.0) || !std::isfinite(beta_b))
        throw std::invalid_argument("EngineParams: beta_b must be positive and finite");
    if (!std::isfinite(theta))
        throw std::invalid_argument("EngineParams: theta must be finite");
}

bool EngineParams::hot_cold_convention_ok() const {
    return beta_a < beta_b;  // T_A > T_B
}

double partition_function(double x, int d) {
    require_levels(d, "partition_function");
    require_positive_x(x, "partition_function");
    return detail::geometric_ratio(x, d);
}

double mean_occupation(double x, int d) {
    require_levels(d, "mean_occupation");
    require_positive_x(x, "mean_occupation");
    return detail::occupation_kernel(x, d);
}

double occupation_variance(double x, int d) {
    require_levels(d, "occupation_variance");
    require_positive_x(x, "occupation_variance");
    return detail::variance_kernel(x, d);
}

double mean_occupation_inverse(double n_target, int d) {
    require_levels(d, "mean_occupation_inverse");
    double top = 0.5 * (d - 1);
    if (!(n_target > 0.0) || !(n_target < top) || !std::isfinite(n_target))
        throw std::domain_error(
            "mean_occupation_inverse: target must lie in (0, (d-1)/2)");

    // Exponential bracketing, then bisection; the kernel is strictly
    // decreasing from (d-1)/2 at 0+ to 0 at infinity.
    double lo = 1.0, hi = 1.0;
    while (detail::occupation_kernel(lo, d) < n_target && lo > 1e-300) lo *= 0.25;
    while (detail::occupation_kernel(hi, d) > n_target && hi < 1e6) hi *= 4.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double g = detail::occupation_kernel(mid, d);
        if (g > n_target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double mean_work(const EngineParams& p) {
    return (p.omega_b - p.omega_a) * swap_times_occupation_gap(p);
}

double mean_heat_hot(const EngineParams& p) {
    return p.omega_a * swap_times_occupation_gap(p);
}

double mean_heat_cold(const EngineParams& p) {
    return -p.omega_b * swap_times_occupation_gap(p);
}

double entropy_production(const EngineParams& p) {
    double sig = (p.xb() - p.xa()) * swap_times_occupation_gap(p);
    // Monotonicity makes the product nonnegative; rounding of the
    // occupation difference can produce a stray -1e-30 near x_a = x_b.
    return sig < 0.0 ? 0.0 : sig;
}

Regime classify_regime(const EngineParams& p, double rel_tol) {
    double r_omega = p.omega_a / p.omega_b;
    double r_temp = p.beta_b / p.beta_a;  // T_A / T_B
    if (std::abs(r_omega - 1.0) <= rel_tol * std::max(r_omega, 1.0))
        return Regime::Boundary;
    if (std::abs(r_omega - r_temp) <= rel_tol * std::max(r_omega, r_temp))
        return Regime::Boundary;
    // With T_A < T_B (convention violated) the accelerator and refrigerator
    // inequalities can overlap; the frequency test takes precedence.
    if (r_omega < 1.0) return Regime::ThermalAccelerator;
    if (r_omega < r_temp) return Regime::HeatEngine;
    return Regime::Refrigerator;
}

EfficiencyResult otto_efficiency(const EngineParams& p) {
    return {1.0 - p.omega_b / p.omega_a,
            classify_regime(p) == Regime::HeatEngine};
}

EfficiencyResult otto_cop(const EngineParams& p) {
    if (p.omega_a == p.omega_b)
        throw std::domain_error("otto_cop: requires omega_a != omega_b");
    return {p.omega_b / (p.omega_a - p.omega_b),
            classify_regime(p) == Regime::Refrigerator};
}

double carnot_efficiency(const EngineParams& p) {
    return 1.0 - p.beta_a / p.beta_b;
}

double carnot_cop(const EngineParams& p) {
    if (p.beta_a == p.beta_b)
        throw std::domain_error("carnot_cop: requires T_A != T_B");
    return p.beta_a / (p.beta_b - p.beta_a);
}

double curzon_ahlborn_efficiency(const EngineParams& p) {
    return 1.0 - std::sqrt(p.beta_a / p.beta_b);
}

MomentSet moments(const EngineParams& p) {
    MomentSet m;
    double s2 = p.swap_weight();
    double c2 = 1.0 - s2;
    double na = detail::occupation_kernel(p.xa(), p.d);
    double nb = detail::occupation_kernel(p.xb(), p.d);
    double gap = na - nb;
    double sg = s2 * gap;  // shared with the standalone first moments
    double va = detail::variance_kernel(p.xa(), p.d);
    double vb = detail::variance_kernel(p.xb(), p.d);
    double m2 = va + vb + gap * gap;         // E[(n-m)^2]
    double cvar = va + vb + c2 * gap * gap;  // M2 - s2 gap^2, exactly >= 0

    double dw = p.omega_b - p.omega_a;
    m.mean_w = dw * sg;
    m.mean_qh = p.omega_a * sg;
    m.mean_qc = -p.omega_b * sg;
    m.second_w = s2 * dw * dw * m2;
    m.second_qh = s2 * p.omega_a * p.omega_a * m2;
    m.var_w = s2 * dw * dw * cvar;
    m.var_qh = s2 * p.omega_a * p.omega_a * cvar;
    m.cov_w_qh = s2 * dw * p.omega_a * cvar;
    double sig = (p.xb() - p.xa()) * sg;
    m.entropy_production = sig < 0.0 ? 0.0 : sig;
    m.regime = classify_regime(p);
    return m;
}

}  // namespace qoswap
