#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "qoswap/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "draw.hpp"
#include "oracle.hpp"
#include "qoswap/engine.hpp"
#include "qoswap/spectral.hpp"

using qoswap::EngineParams;
namespace analysis = qoswap::analysis;

namespace {

const double kPi = 3.14159265358979323846;

EngineParams from_x(double xa, double xb, int d, double theta) {
    EngineParams p;
    p.d = d;
    p.omega_a = 2.0;
    p.omega_b = 1.0;
    p.beta_a = xa / p.omega_a;
    p.beta_b = xb / p.omega_b;
    p.theta = theta;
    return p;
}

}  // namespace

TEST_CASE("uncertainty ratio is frequency free and matches frozen points") {
    // ratio(0.1, 2 | d=2, full swap) and a far-from-violation point.
    auto r1 = analysis::tur_bound_check(from_x(0.1, 2.0, 2, kPi / 2));
    CHECK(r1.ratio == doctest::Approx(1.8922665403052809).epsilon(1e-12));
    CHECK(r1.standard_violated);
    CHECK(r1.bound_ok);

    auto r2 = analysis::tur_bound_check(from_x(5.0, 8.0, 2, kPi / 2));
    CHECK(r2.ratio == doctest::Approx(3.2953016765660806).epsilon(1e-12));
    CHECK_FALSE(r2.standard_violated);

    auto r3 = analysis::tur_bound_check(from_x(0.01, 2.0, 2, kPi / 2));
    CHECK(r3.ratio == doctest::Approx(1.8673809550233633).epsilon(1e-12));

    // Same x pair, different frequency split: identical ratio.
    EngineParams q = from_x(0.1, 2.0, 2, kPi / 2);
    q.omega_a = 0.5;
    q.beta_a = 0.1 / 0.5;
    q.omega_b = 3.0;
    q.beta_b = 2.0 / 3.0;
    CHECK(analysis::tur_bound_check(q).ratio ==
          doctest::Approx(r1.ratio).epsilon(1e-12));
}

TEST_CASE("engine uncertainty bound holds across random parameters") {
    qoswap::tpm::SplitMix64 rng(271828);
    int checked = 0;
    for (int rep = 0; rep < 400; ++rep) {
        testdraw::DrawSpec spec;
        spec.respect_convention = false;
        EngineParams p = testdraw::draw_params(rng, spec);
        if (p.xa() == p.xb()) continue;
        auto chk = analysis::tur_bound_check(p);
        CHECK(chk.bound_ok);
        CHECK(chk.entropy_production >= 0.0);
        CHECK(chk.ratio ==
              doctest::Approx(chk.lhs * chk.entropy_production).epsilon(1e-12));
        CHECK(chk.rhs_standard >= chk.rhs_bound);
        // The unit offset is absorbed once 2/<Sigma> reaches 1/ulp scale.
        if (chk.entropy_production > 0.01)
            CHECK(chk.rhs_standard - chk.rhs_bound ==
                  doctest::Approx(1.0).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked > 390);
}

TEST_CASE("uncertainty check rejects degenerate cycles") {
    EngineParams p = from_x(1.0, 1.0, 3, kPi / 2);  // x_a == x_b
    CHECK_THROWS_AS((void)analysis::tur_bound_check(p), std::domain_error);
    EngineParams q;  // omega_a == omega_b: zero mean work at nonzero entropy
    q.d = 3;
    q.omega_a = q.omega_b = 1.0;
    q.beta_a = 0.5;
    q.beta_b = 2.0;
    CHECK_THROWS_AS((void)analysis::tur_bound_check(q), std::domain_error);
}

TEST_CASE("asymptotic precision limit takes its closed value") {
    CHECK(analysis::ultimate_snr_limit(2, kPi / 2) == doctest::Approx(1.0));
    CHECK(analysis::ultimate_snr_limit(4, kPi / 2) ==
          doctest::Approx(5.0 / 9.0).epsilon(1e-15));
    CHECK(analysis::ultimate_snr_limit(8, kPi / 2) ==
          doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(analysis::ultimate_snr_limit(2, kPi / 3) ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(analysis::ultimate_snr_limit(3, kPi / 4) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)analysis::ultimate_snr_limit(1, kPi / 2), std::domain_error);
    CHECK_THROWS_AS((void)analysis::ultimate_snr_limit(4, 0.0), std::domain_error);
}

TEST_CASE("relative work variance approaches the precision limit") {
    for (int d : {2, 4, 8})
        for (double theta : {kPi / 2, kPi / 3}) {
            EngineParams p = from_x(1e-6, 50.0, d, theta);
            auto m = qoswap::moments(p);
            double lhs = m.var_w / (m.mean_w * m.mean_w);
            double lim = analysis::ultimate_snr_limit(d, theta);
            CHECK(lhs == doctest::Approx(lim).epsilon(1e-3));
            CHECK(lhs >= lim * (1.0 - 1e-9));  // limit approached from above
        }
}

TEST_CASE("golden section finds known minima") {
    auto quad = analysis::golden_min([](double x) { return (x - 2) * (x - 2) + 1; },
                                     0.0, 5.0);
    CHECK(quad.converged);
    CHECK(quad.x == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(quad.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quad.evaluations > 2);

    auto trig = analysis::golden_min([](double x) { return std::cos(x); }, 2.0, 4.0);
    CHECK(trig.converged);
    CHECK(trig.x == doctest::Approx(kPi).epsilon(1e-7));
    CHECK(trig.value == doctest::Approx(-1.0).epsilon(1e-12));

    // Monotone function: minimum pinned to an endpoint.
    auto mono = analysis::golden_min([](double x) { return x; }, 1.0, 3.0);
    CHECK(mono.x == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("strongest violation of the standard bound sits at the frozen point") {
    auto v = analysis::strongest_standard_violation(2, kPi / 2);
    CHECK(v.converged);
    CHECK(v.x_a_pin == 1e-4);
    CHECK(v.ratio_min == doctest::Approx(1.86450).epsilon(5e-4));
    CHECK(v.x_b_opt == doctest::Approx(2.01016).epsilon(5e-3));

    // The violation deepens as the pin moves toward zero.
    auto v3 = analysis::strongest_standard_violation(2, kPi / 2, 1e-3);
    auto v5 = analysis::strongest_standard_violation(2, kPi / 2, 1e-5);
    CHECK(v5.ratio_min < v.ratio_min);
    CHECK(v.ratio_min < v3.ratio_min);
    CHECK(v3.ratio_min < 2.0);
}

TEST_CASE("grid axes place points by the declared rule") {
    analysis::GridAxis log_axis{1e-2, 1e1, 4, true};
    CHECK(log_axis.at(0) == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(log_axis.at(1) == doctest::Approx(1e-1).epsilon(1e-14));
    CHECK(log_axis.at(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(log_axis.at(3) == doctest::Approx(1e1).epsilon(1e-14));

    analysis::GridAxis lin_axis{0.0, 1.0, 5, false};
    CHECK(lin_axis.at(0) == 0.0);
    CHECK(lin_axis.at(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lin_axis.at(4) == doctest::Approx(1.0).epsilon(1e-15));

    analysis::GridAxis single{3.0, 9.0, 1, false};
    CHECK(single.at(0) == 3.0);

    analysis::GridAxis measure = analysis::violation_measure_axis();
    CHECK(measure.points == 400);
    CHECK(measure.log_scale);
    CHECK(measure.min == doctest::Approx(1e-2));
    CHECK(measure.max == doctest::Approx(1e1));
}

TEST_CASE("scan streams every grid cell and flags the diagonal") {
    analysis::GridAxis ax{1e-2, 1e1, 12, true};
    int rows = 0, degenerate = 0;
    analysis::tur_scan(2, kPi / 2, ax, ax, [&](const analysis::TurScanRow& row) {
        ++rows;
        if (row.degenerate) {
            ++degenerate;
            CHECK(row.x_a == row.x_b);
            CHECK_FALSE(row.standard_violated);
        } else {
            CHECK(std::isfinite(row.ratio));
            CHECK(row.standard_violated == (row.ratio < 2.0));
        }
    });
    CHECK(rows == 144);
    CHECK(degenerate == 12);
}

TEST_CASE("violation counts shrink with dimension and with weaker swaps") {
    analysis::GridAxis ax{1e-2, 1e1, 60, true};
    // Frozen counts on the 60 x 60 grid.
    long c2 = analysis::violation_count(2, kPi / 2, ax, ax);
    long c3 = analysis::violation_count(3, kPi / 2, ax, ax);
    long c4 = analysis::violation_count(4, kPi / 2, ax, ax);
    long c6 = analysis::violation_count(6, kPi / 2, ax, ax);
    CHECK(c2 == 2262);
    CHECK(c3 == 1962);
    CHECK(c4 == 1742);
    CHECK(c6 == 1460);
    CHECK(c2 > c3);
    CHECK(c3 > c4);
    CHECK(c4 > c6);

    long t1 = analysis::violation_count(2, kPi / 2, ax, ax);
    long t2 = analysis::violation_count(2, 5 * kPi / 12, ax, ax);
    long t3 = analysis::violation_count(2, kPi / 3, ax, ax);
    CHECK(t2 == 2138);
    CHECK(t3 == 1678);
    CHECK(t1 > t2);
    CHECK(t2 > t3);
}

TEST_CASE("efficiency at maximum work exceeds the square-root benchmark at d = 2") {
    struct Case {
        double r, eta_m;
    };
    // Frozen optima for T_B/T_A in {0.2, 0.5, 0.8}.
    for (auto c : {Case{0.2, 0.576833}, Case{0.5, 0.296331}, Case{0.8, 0.105721}}) {
        auto res = analysis::efficiency_at_max_work(2, c.r, kPi / 2);
        CHECK(res.converged);
        CHECK(res.eta_m == doctest::Approx(c.eta_m).epsilon(2e-4));
        CHECK(res.eta_ca == doctest::Approx(1.0 - std::sqrt(c.r)).epsilon(1e-14));
        CHECK(res.eta_carnot == doctest::Approx(1.0 - c.r).epsilon(1e-14));
        CHECK(res.eta_m > res.eta_ca);
        CHECK(res.eta_m < res.eta_carnot);
        CHECK(res.w_max > 0.0);
        CHECK(res.x_opt > 1e-6);
        CHECK(res.x_opt < 50.0);
    }
}

TEST_CASE("efficiency at maximum work collapses to the benchmark at large d") {
    for (double r : {0.2, 0.5, 0.8}) {
        auto res = analysis::efficiency_at_max_work(64, r, kPi / 2);
        CHECK(res.converged);
        CHECK(std::abs(res.eta_m - res.eta_ca) < 0.01);
        CHECK(res.eta_m > res.eta_ca - 1e-6);
    }
}

TEST_CASE("partial swaps move the work scale, not the optimum") {
    auto full = analysis::efficiency_at_max_work(2, 0.5, kPi / 2);
    auto partial = analysis::efficiency_at_max_work(2, 0.5, kPi / 3);
    CHECK(partial.eta_m == doctest::Approx(full.eta_m).epsilon(1e-6));
    CHECK(partial.x_opt == doctest::Approx(full.x_opt).epsilon(1e-6));
    CHECK(partial.w_max == doctest::Approx(0.75 * full.w_max).epsilon(1e-9));
}

TEST_CASE("max-work search rejects bad arguments") {
    CHECK_THROWS_AS((void)analysis::efficiency_at_max_work(1, 0.5, kPi / 2),
                    std::domain_error);
    CHECK_THROWS_AS((void)analysis::efficiency_at_max_work(2, 0.0, kPi / 2),
                    std::domain_error);
    CHECK_THROWS_AS((void)analysis::efficiency_at_max_work(2, 1.0, kPi / 2),
                    std::domain_error);
    CHECK_THROWS_AS((void)analysis::efficiency_at_max_work(2, 0.5, 0.0),
                    std::domain_error);
}

TEST_CASE("heat-engine efficiency respects the mean-variance bound") {
    qoswap::tpm::SplitMix64 rng(31415);
    int engines = 0;
    for (int rep = 0; rep < 600 && engines < 120; ++rep) {
        EngineParams p = testdraw::draw_params(rng, {});
        if (qoswap::classify_regime(p) != qoswap::Regime::HeatEngine) continue;
        ++engines;
        auto chk = analysis::efficiency_bound_check(p);
        CHECK(chk.regime_ok);
        CHECK(chk.ok);
        CHECK(chk.eta <= chk.bound + 1e-12);
        CHECK(chk.bound <= chk.eta_carnot * (1 + 1e-12));
        CHECK(chk.eta == doctest::Approx(1.0 - p.omega_b / p.omega_a).epsilon(1e-12));
    }
    CHECK(engines == 120);
}

TEST_CASE("efficiency bound check flags non-engine regimes and bad input") {
    EngineParams p;  // thermal accelerator: omega_b > omega_a
    p.d = 3;
    p.omega_a = 1.0;
    p.omega_b = 2.0;
    p.beta_a = 0.5;
    p.beta_b = 1.5;
    CHECK_FALSE(analysis::efficiency_bound_check(p).regime_ok);

    p.omega_b = 1.0;  // equal frequencies: no work output at all
    CHECK_THROWS_AS((void)analysis::efficiency_bound_check(p), std::domain_error);
}
