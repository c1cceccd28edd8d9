#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "qoswap/finite_time.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "draw.hpp"
#include "qoswap/engine.hpp"

using qoswap::EngineParams;
namespace ft = qoswap::finite_time;

namespace {

const double kPi = 3.14159265358979323846;

// d = 2 engine pinned to N_A = 0.3, N_B = 0.1 with omega_a - omega_b = 5,
// so the equal-rate cycle at tau_q = 2 gives power tanh(1)/2 exactly.
ft::FiniteTimeParams tanh_case() {
    ft::FiniteTimeParams p;
    p.engine.d = 2;
    p.engine.omega_a = 6.0;
    p.engine.omega_b = 1.0;
    p.engine.beta_a = std::log(7.0 / 3.0) / 6.0;
    p.engine.beta_b = std::log(9.0);
    p.engine.theta = kPi / 2;
    p.alpha_a = 1.0;
    p.alpha_b = 1.0;
    p.tau_q = 2.0;
    p.tau_w = 0.0;
    return p;
}

}  // namespace

TEST_CASE("parameter validation names the broken invariant") {
    ft::FiniteTimeParams p = tanh_case();
    CHECK_NOTHROW(p.validate());
    p.engine.theta = kPi / 3;  // partial swap unsupported here
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.engine.theta = 3 * kPi / 2;  // still a full swap
    CHECK_NOTHROW(p.validate());
    p.engine.theta = -kPi / 2;
    CHECK_NOTHROW(p.validate());
    p = tanh_case();
    p.alpha_a = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = tanh_case();
    p.tau_q = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = tanh_case();
    p.tau_w = -0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("frozen limit cycle of the equal-rate qubit engine") {
    auto s = ft::steady_state(tanh_case());
    CHECK_FALSE(s.degenerate_tau);
    CHECK_FALSE(s.beta_capped);
    CHECK(s.n_a_star == doctest::Approx(0.27615941559557649).epsilon(1e-12));
    CHECK(s.n_b_star == doctest::Approx(0.12384058440442351).epsilon(1e-12));
    CHECK(s.x_a_star == doctest::Approx(0.96359288914196511).epsilon(1e-12));
    CHECK(s.x_b_star == doctest::Approx(1.9565529267950472).epsilon(1e-12));
    CHECK(s.beta_a_star == doctest::Approx(0.16059881485699419).epsilon(1e-12));
    CHECK(s.beta_b_star == doctest::Approx(1.9565529267950472).epsilon(1e-12));

    auto m = ft::steady_moments(tanh_case());
    CHECK(m.power == doctest::Approx(0.38079707797788244).epsilon(1e-12));
    CHECK(m.entropy_production_bath ==
          doctest::Approx(0.20561925971938448).epsilon(1e-12));
    CHECK(m.entropy_production_internal ==
          doctest::Approx(0.15124651235484072).epsilon(1e-12));
    CHECK(m.at_star.entropy_production == m.entropy_production_bath);
    CHECK(ft::power(tanh_case()) == doctest::Approx(m.power).epsilon(1e-14));
}

TEST_CASE("equal relaxation rates reduce the occupation gap by tanh") {
    for (double alpha : {0.3, 1.0, 2.5})
        for (double tau : {0.2, 1.0, 4.0}) {
            ft::FiniteTimeParams p = tanh_case();
            p.alpha_a = p.alpha_b = alpha;
            p.tau_q = tau;
            auto s = ft::steady_state(p);
            double gap = s.n_a_star - s.n_b_star;
            CHECK(gap == doctest::Approx(0.2 * std::tanh(alpha * tau / 2))
                             .epsilon(1e-13));
        }
}

TEST_CASE("limit cycle is the fixed point of the swap-relax recursion") {
    ft::FiniteTimeParams p;
    p.engine.d = 5;
    p.engine.omega_a = 2.0;
    p.engine.omega_b = 1.3;
    p.engine.beta_a = 0.4;
    p.engine.beta_b = 1.1;
    p.alpha_a = 0.3;
    p.alpha_b = 1.7;
    p.tau_q = 1.0;

    double na = qoswap::mean_occupation(p.engine.xa(), 5);
    double nb = qoswap::mean_occupation(p.engine.xb(), 5);
    double ea = std::exp(-p.alpha_a * p.tau_q);
    double eb = std::exp(-p.alpha_b * p.tau_q);

    // Iterate the cycle map: swap, then relax each side toward its bath.
    double a = na, b = nb;
    for (int i = 0; i < 1000; ++i) {
        double a_next = na + (b - na) * ea;
        double b_next = nb + (a - nb) * eb;
        a = a_next;
        b = b_next;
    }
    auto s = ft::steady_state(p);
    CHECK(s.n_a_star == doctest::Approx(a).epsilon(1e-12));
    CHECK(s.n_b_star == doctest::Approx(b).epsilon(1e-12));

    // Direct fixed-point residuals.
    CHECK(s.n_a_star - (na + (s.n_b_star - na) * ea) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(s.n_b_star - (nb + (s.n_a_star - nb) * eb) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-14));
}

TEST_CASE("long strokes recover the ideal cycle") {
    ft::FiniteTimeParams p = tanh_case();
    p.tau_q = 50.0;
    auto s = ft::steady_state(p);
    CHECK(s.n_a_star == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.n_b_star == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.x_a_star == doctest::Approx(p.engine.xa()).epsilon(1e-11));
    CHECK(s.beta_b_star == doctest::Approx(p.engine.beta_b).epsilon(1e-11));
    auto m = ft::steady_moments(p);
    double ideal = -qoswap::mean_work(p.engine);
    CHECK(m.power == doctest::Approx(ideal / 50.0).epsilon(1e-12));
}

TEST_CASE("instant strokes equalize the occupations") {
    ft::FiniteTimeParams p = tanh_case();
    p.alpha_a = 2.0;
    p.alpha_b = 0.5;
    p.tau_q = 0.0;
    p.tau_w = 1.0;
    auto s = ft::steady_state(p);
    CHECK(s.degenerate_tau);
    double pooled = (2.0 * 0.3 + 0.5 * 0.1) / 2.5;
    CHECK(s.n_a_star == doctest::Approx(pooled).epsilon(1e-15));
    CHECK(s.n_b_star == doctest::Approx(pooled).epsilon(1e-15));
    auto m = ft::steady_moments(p);
    CHECK(m.at_star.mean_w == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(m.entropy_production_internal == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(ft::power(p) == 0.0);
}

TEST_CASE("vanishing cycle time approaches the analytic power limit") {
    ft::FiniteTimeParams p = tanh_case();
    p.alpha_a = 1.0;
    p.alpha_b = 3.0;
    p.tau_q = 0.0;
    p.tau_w = 0.0;
    // alpha_a alpha_b / (alpha_a + alpha_b) * (omega_a - omega_b) * 0.2 = 0.75
    CHECK(ft::power_zero_stroke_limit(p) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(ft::power(p) == doctest::Approx(0.75).epsilon(1e-14));

    p.tau_q = 1e-9;
    CHECK(ft::power(p) == doctest::Approx(0.75).epsilon(1e-8));
    p.tau_q = 1e-6;
    double p6 = ft::power(p);
    p.tau_q = 1e-9;
    double p9 = ft::power(p);
    CHECK(std::abs(p9 - 0.75) < std::abs(p6 - 0.75));
}

TEST_CASE("bath entropy production dominates the internal one") {
    qoswap::tpm::SplitMix64 rng(6061);
    for (int rep = 0; rep < 200; ++rep) {
        testdraw::DrawSpec spec;
        spec.d_max = 12;
        spec.theta_min = kPi / 2;  // validate() needs a full swap
        spec.theta_max = kPi / 2;
        ft::FiniteTimeParams p;
        p.engine = testdraw::draw_params(rng, spec);
        p.engine.theta = kPi / 2;
        p.alpha_a = testdraw::log_uniform(rng, 0.1, 10.0);
        p.alpha_b = testdraw::log_uniform(rng, 0.1, 10.0);
        p.tau_q = testdraw::log_uniform(rng, 0.01, 20.0);
        auto m = ft::steady_moments(p);
        CHECK(m.entropy_production_bath >= 0.0);
        CHECK(m.entropy_production_internal >= 0.0);
        CHECK(m.entropy_production_internal <=
              m.entropy_production_bath * (1 + 1e-12) + 1e-300);
    }
}

TEST_CASE("output efficiency never moves with the stroke time") {
    for (double tau : {0.3, 2.0, 10.0}) {
        ft::FiniteTimeParams p = tanh_case();
        p.tau_q = tau;
        auto m = ft::steady_moments(p);
        // -<W>/<Q_H> depends on the frequencies alone.
        CHECK(-m.at_star.mean_w / m.at_star.mean_qh ==
              doctest::Approx(1.0 - p.engine.omega_b / p.engine.omega_a)
                  .epsilon(1e-12));
    }
}

TEST_CASE("power falls monotonically with stroke time when tau_w = 0") {
    ft::FiniteTimeParams p = tanh_case();
    p.tau_q = 0.5;
    double p1 = ft::power(p);
    p.tau_q = 1.0;
    double p2 = ft::power(p);
    p.tau_q = 2.0;
    double p3 = ft::power(p);
    CHECK(p1 > p2);
    CHECK(p2 > p3);
}

TEST_CASE("optimal power sits on the boundary only for free swaps") {
    ft::FiniteTimeParams p = tanh_case();
    p.tau_w = 0.0;
    auto opt0 = ft::optimal_power(p);
    CHECK(opt0.boundary);
    CHECK(opt0.converged);
    CHECK(opt0.tau_q_opt == 0.0);
    CHECK(opt0.p_opt == doctest::Approx(ft::power_zero_stroke_limit(p)).epsilon(1e-14));

    p.tau_w = 1.0;
    auto opt1 = ft::optimal_power(p);
    CHECK_FALSE(opt1.boundary);
    CHECK(opt1.converged);
    CHECK(opt1.p_opt > 0.0);
    CHECK(opt1.tau_q_opt > 0.0);
    for (double shift : {0.999, 1.001, 10.0}) {
        ft::FiniteTimeParams q = p;
        q.tau_q = opt1.tau_q_opt * shift;
        CHECK(ft::power(q) <= opt1.p_opt * (1 + 1e-9));
    }

    ft::FiniteTimeParams p01 = tanh_case();
    p01.tau_w = 0.1;
    ft::FiniteTimeParams p10 = tanh_case();
    p10.tau_w = 10.0;
    auto optq = ft::optimal_power(p01);
    auto optd = ft::optimal_power(p10);
    CHECK(optq.tau_q_opt < opt1.tau_q_opt);
    CHECK(opt1.tau_q_opt < optd.tau_q_opt);
}

TEST_CASE("precision of the work output improves with longer strokes") {
    auto snr = [](double tau) {
        ft::FiniteTimeParams p = tanh_case();
        p.tau_q = tau;
        auto m = ft::steady_moments(p);
        return m.at_star.mean_w * m.at_star.mean_w / m.at_star.var_w;
    };
    CHECK(snr(1.0) < snr(3.0));
    CHECK(snr(3.0) < snr(50.0));
}

TEST_CASE("near-infinite effective temperature is capped and flagged") {
    ft::FiniteTimeParams p;
    p.engine.d = 2;
    p.engine.omega_a = 1.0;
    p.engine.omega_b = 0.5;
    p.engine.beta_a = 1e-13;  // N_A at the band top to double precision
    p.engine.beta_b = 1e-13;
    p.alpha_a = p.alpha_b = 1.0;
    p.tau_q = 1.0;
    auto s = ft::steady_state(p);
    CHECK(s.beta_capped);
    CHECK(s.beta_a_star >= 1e-12);
}
