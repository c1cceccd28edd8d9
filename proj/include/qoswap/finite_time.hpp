#pragma once

#include "qoswap/engine.hpp"

namespace qoswap::finite_time {

// Repeated cycles with thermalization strokes of finite duration tau_q:
// each qudit relaxes toward its bath at rate alpha_a / alpha_b, the swap is
// full (theta an odd multiple of pi/2), and tau_w is the swap-stroke
// duration entering only the power bookkeeping.
struct FiniteTimeParams {
    EngineParams engine;
    double alpha_a = 1.0;
    double alpha_b = 1.0;
    double tau_q = 1.0;
    double tau_w = 0.0;

    void validate() const;  // throws std::invalid_argument
};

// Limit cycle of the relaxation map. The steady state is bi-Gibbs with
// effective occupations N*_a, N*_b; x*_x = g^{-1}(N*_x) is the effective
// beta*omega and beta*_x = x*_x / omega_x.
struct SteadyState {
    double n_a_star = 0;
    double n_b_star = 0;
    double x_a_star = 0;
    double x_b_star = 0;
    double beta_a_star = 0;
    double beta_b_star = 0;
    // tau_q = 0: occupations equalize, every work quantity vanishes.
    bool degenerate_tau = false;
    // N* indistinguishable from the band top (d-1)/2: beta* capped at 1e-12.
    bool beta_capped = false;
};

SteadyState steady_state(const FiniteTimeParams& p);

// Cycle moments in the limit cycle: the engine closed forms evaluated at the
// starred inverse temperatures. Entropy production uses the physical bath
// temperatures; the starred-temperature value is exposed as a diagnostic.
struct SteadyMoments {
    SteadyState state;
    MomentSet at_star;                    // entropy_production field = bath value
    double entropy_production_bath = 0;   // (x_b - x_a) (N*_a - N*_b)
    double entropy_production_internal = 0;  // (x*_b - x*_a) (N*_a - N*_b)
    double power = 0;                     // <-W> / (tau_q + tau_w)
};

SteadyMoments steady_moments(const FiniteTimeParams& p);

// Output power <-W>/(tau_q + tau_w) in the limit cycle. tau_q = 0 with
// tau_w > 0 gives exactly zero; tau_q = tau_w = 0 returns the analytic
// tau_q -> 0 limit alpha_a alpha_b/(alpha_a+alpha_b) (omega_a-omega_b)(N_A-N_B).
double power(const FiniteTimeParams& p);

// The tau_q -> 0 limit above (equal rates: alpha/2 per unit of
// (omega_a - omega_b)(N_A - N_B)).
double power_zero_stroke_limit(const FiniteTimeParams& p);

// Maximize power over tau_q in (0, 50/min(alpha)] at fixed tau_w.
// tau_w = 0: power is maximal at the tau_q -> 0 boundary; returned with
// boundary = true and the limit value.
struct OptimalPower {
    double tau_q_opt = 0;
    double p_opt = 0;
    bool boundary = false;
    bool converged = false;
};

OptimalPower optimal_power(const FiniteTimeParams& p);

}  // namespace qoswap::finite_time
