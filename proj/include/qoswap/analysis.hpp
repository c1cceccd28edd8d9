#pragma once

#include <functional>

#include "qoswap/engine.hpp"

namespace qoswap::analysis {

// Thermodynamic uncertainty diagnostics for the work output.
// lhs = var(W)/<W>^2, ratio = var(W) <Sigma> / <W>^2.
// The swap-engine bound is lhs >= 2/<Sigma> - 1 (ratio >= 2 - <Sigma>);
// the standard bound would be lhs >= 2/<Sigma> (ratio >= 2).
struct TurCheck {
    double lhs = 0;
    double rhs_bound = 0;      // 2/<Sigma> - 1
    double rhs_standard = 0;   // 2/<Sigma>
    double ratio = 0;          // var(W) <Sigma> / <W>^2
    double entropy_production = 0;
    bool bound_ok = true;           // lhs >= rhs_bound - tol
    bool standard_violated = false; // lhs < rhs_standard
};

// Requires a nondegenerate cycle (<W> != 0, <Sigma> > 0).
TurCheck tur_bound_check(const EngineParams& p, double tol = 1e-10);

// Limit of var(W)/<W>^2 for beta_a omega_a -> 0, beta_b omega_b -> inf:
// (d + 1 + 3 (d-1) cos^2 theta) / (3 (d-1) sin^2 theta).
// Requires sin(theta) != 0.
double ultimate_snr_limit(int d, double theta);

// Golden-section minimizer on [a, b] for a unimodal function. Converges to
// relative tolerance rel_tol on the abscissa.
struct GoldenResult {
    double x = 0;
    double value = 0;
    int evaluations = 0;
    bool converged = false;
};

GoldenResult golden_min(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-8, int max_iter = 200);

// Efficiency at maximum work output for fixed T_B/T_A: maximize |<W>| over
// the frequency ratio (eta in (0, eta_carnot)) and the cold-side scale
// x = beta_b omega_b / 2 in [1e-6, 50], by nested golden sections over a
// 200 x 200 coarse-grid prescan. eta_m > eta_ca at small d and
// eta_m -> eta_ca = 1 - sqrt(T_B/T_A) as d grows.
struct MaxWorkResult {
    int d = 2;
    double tb_over_ta = 0;
    double eta_m = 0;
    double eta_ca = 0;
    double eta_carnot = 0;
    double x_opt = 0;   // beta_b omega_b at the optimum
    double w_max = 0;   // maximal |<W>| in units omega_b = x_opt / beta_b, T_B = 1
    bool converged = false;
};

MaxWorkResult efficiency_at_max_work(int d, double tb_over_ta, double theta);

// Heat-engine efficiency bound eta <= eta_carnot / (1 + 2 T_B <-W>/<W^2>).
struct EfficiencyBoundCheck {
    double eta = 0;
    double bound = 0;
    double eta_carnot = 0;
    bool ok = true;        // eta <= bound + tol
    bool regime_ok = true; // heat engine regime
};

EfficiencyBoundCheck efficiency_bound_check(const EngineParams& p, double tol = 1e-12);

// Minimize ratio = var(W) <Sigma> / <W>^2 over x_b = beta_b omega_b in
// [lo, hi] with x_a pinned (golden section). The strongest violation of the
// standard bound for d = 2, theta = pi/2 sits near x_b = 2.010 with ratio
// 1.864 as x_a -> 0.
struct ViolationSearch {
    double x_a_pin = 0;
    double x_b_opt = 0;
    double ratio_min = 0;
    bool converged = false;
};

ViolationSearch strongest_standard_violation(int d, double theta,
                                             double x_a_pin = 1e-4,
                                             double lo = 0.5, double hi = 5.0);

// One axis of a scan grid.
struct GridAxis {
    double min = 0;
    double max = 0;
    int points = 1;
    bool log_scale = true;
    double at(int i) const;
};

struct TurScanRow {
    double x_a = 0;
    double x_b = 0;
    double ratio = 0;        // var(W) <Sigma> / <W>^2
    bool standard_violated = false;
    bool degenerate = false; // x_a == x_b: zero mean work, no ratio
};

// Streams the grid row by row; never materializes more than one row.
void tur_scan(int d, double theta, const GridAxis& a, const GridAxis& b,
              const std::function<void(const TurScanRow&)>& emit);

// Number of grid points violating the standard bound. The fixed 400 x 400
// log grid over [1e-2, 1e1]^2 is the violation-region measure used to
// compare dimensions and swap angles.
long violation_count(int d, double theta, const GridAxis& a, const GridAxis& b);

GridAxis violation_measure_axis();  // 400-point log axis on [1e-2, 1e1]

}  // namespace qoswap::analysis
