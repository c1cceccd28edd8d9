#include "qoswap/finite_time.hpp"

#include <cmath>
#include <stdexcept>

#include "detail_math.hpp"
#include "qoswap/analysis.hpp"

namespace qoswap::finite_time {

namespace {

constexpr double kBetaFloor = 1e-12;

// g^{-1} with the band-top cap folded in: occupations indistinguishable
// from (d-1)/2 map to the beta floor instead of a subnormal bisection.
double inverse_or_cap(double n_star, int d, double omega, double& beta,
                      bool& capped) {
    double top = 0.5 * (d - 1);
    double x;
    if (n_star >= top) {
        x = kBetaFloor * omega;
    } else {
        x = mean_occupation_inverse(n_star, d);
    }
    beta = x / omega;
    if (beta < kBetaFloor) {
        beta = kBetaFloor;
        x = beta * omega;
        capped = true;
    }
    return x;
}

// Occupation gap in the limit cycle, factored as
// [(1-e_a)(1-e_b)/(1-e_a e_b)] (N_A - N_B). The factor form keeps full
// precision for short strokes, where the n*_a - n*_b difference cancels.
double occupation_gap_star(const FiniteTimeParams& p) {
    if (p.tau_q == 0.0) return 0.0;
    double wa = -std::expm1(-p.alpha_a * p.tau_q);
    double wb = -std::expm1(-p.alpha_b * p.tau_q);
    double denom = -std::expm1(-(p.alpha_a + p.alpha_b) * p.tau_q);
    double gap = mean_occupation(p.engine.xa(), p.engine.d) -
                 mean_occupation(p.engine.xb(), p.engine.d);
    return wa * wb / denom * gap;
}

}  // namespace

void FiniteTimeParams::validate() const {
    engine.validate();
    double s = std::sin(engine.theta);
    if (std::abs(s * s - 1.0) > 1e-12)
        throw std::invalid_argument(
            "FiniteTimeParams: theta must be an odd multiple of pi/2 (full swap)");
    if (!(alpha_a > 0.0) || !std::isfinite(alpha_a))
        throw std::invalid_argument("FiniteTimeParams: alpha_a must be positive and finite");
    if (!(alpha_b > 0.0) || !std::isfinite(alpha_b))
        throw std::invalid_argument("FiniteTimeParams: alpha_b must be positive and finite");
    if (!(tau_q >= 0.0) || !std::isfinite(tau_q))
        throw std::invalid_argument("FiniteTimeParams: tau_q must be nonnegative and finite");
    if (!(tau_w >= 0.0) || !std::isfinite(tau_w))
        throw std::invalid_argument("FiniteTimeParams: tau_w must be nonnegative and finite");
}

SteadyState steady_state(const FiniteTimeParams& p) {
    p.validate();
    int d = p.engine.d;
    double na = mean_occupation(p.engine.xa(), d);
    double nb = mean_occupation(p.engine.xb(), d);

    SteadyState s;
    if (p.tau_q == 0.0) {
        s.degenerate_tau = true;
        double pooled = (p.alpha_a * na + p.alpha_b * nb) / (p.alpha_a + p.alpha_b);
        s.n_a_star = pooled;
        s.n_b_star = pooled;
    } else {
        // 1 - e^{-a tau} via expm1: exact for short strokes.
        double ea = std::exp(-p.alpha_a * p.tau_q);
        double eb = std::exp(-p.alpha_b * p.tau_q);
        double wa = -std::expm1(-p.alpha_a * p.tau_q);
        double wb = -std::expm1(-p.alpha_b * p.tau_q);
        double denom = -std::expm1(-(p.alpha_a + p.alpha_b) * p.tau_q);
        s.n_a_star = (na * wa + nb * wb * ea) / denom;
        s.n_b_star = (nb * wb + na * wa * eb) / denom;
    }
    s.x_a_star = inverse_or_cap(s.n_a_star, d, p.engine.omega_a, s.beta_a_star,
                                s.beta_capped);
    s.x_b_star = inverse_or_cap(s.n_b_star, d, p.engine.omega_b, s.beta_b_star,
                                s.beta_capped);
    return s;
}

SteadyMoments steady_moments(const FiniteTimeParams& p) {
    SteadyMoments out;
    out.state = steady_state(p);
    EngineParams starred = p.engine;
    starred.beta_a = out.state.beta_a_star;
    starred.beta_b = out.state.beta_b_star;
    out.at_star = moments(starred);

    double gap = occupation_gap_star(p);
    double bath = (p.engine.xb() - p.engine.xa()) * gap;
    double internal = (out.state.x_b_star - out.state.x_a_star) * gap;
    out.entropy_production_bath = bath < 0.0 ? 0.0 : bath;
    out.entropy_production_internal = internal < 0.0 ? 0.0 : internal;
    out.at_star.entropy_production = out.entropy_production_bath;
    out.power = power(p);
    return out;
}

double power(const FiniteTimeParams& p) {
    p.validate();
    double total = p.tau_q + p.tau_w;
    if (total == 0.0) return power_zero_stroke_limit(p);
    return (p.engine.omega_a - p.engine.omega_b) * occupation_gap_star(p) /
           total;
}

double power_zero_stroke_limit(const FiniteTimeParams& p) {
    p.validate();
    double na = mean_occupation(p.engine.xa(), p.engine.d);
    double nb = mean_occupation(p.engine.xb(), p.engine.d);
    return p.alpha_a * p.alpha_b / (p.alpha_a + p.alpha_b) *
           (p.engine.omega_a - p.engine.omega_b) * (na - nb);
}

OptimalPower optimal_power(const FiniteTimeParams& p) {
    p.validate();
    OptimalPower out;
    if (p.tau_w == 0.0) {
        out.tau_q_opt = 0.0;
        out.p_opt = power_zero_stroke_limit(p);
        out.boundary = true;
        out.converged = true;
        return out;
    }
    double hi = 50.0 / std::min(p.alpha_a, p.alpha_b);
    auto neg_power = [&](double tau) {
        FiniteTimeParams q = p;
        q.tau_q = tau;
        return -power(q);
    };
    analysis::GoldenResult g = analysis::golden_min(neg_power, 0.0, hi, 1e-10);
    out.tau_q_opt = g.x;
    out.p_opt = -g.value;
    out.boundary = false;
    out.converged = g.converged;
    return out;
}

}  // namespace qoswap::finite_time
