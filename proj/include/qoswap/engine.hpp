#pragma once

#include <string>

namespace qoswap {

// Operating regime of the two-stroke swap cycle, decided by the frequency
// ratio omega_a/omega_b against 1 and T_A/T_B.
enum class Regime { HeatEngine, Refrigerator, ThermalAccelerator, Boundary };

const char* to_string(Regime r);

// Static description of one cycle: two qudits with d equally spaced levels,
// spacing omega_a (hot side) and omega_b (cold side), prepared in Gibbs
// states at inverse temperatures beta_a and beta_b, coupled by a partial
// swap of angle theta.
struct EngineParams {
    int d = 2;
    double omega_a = 1.0;
    double omega_b = 1.0;
    double beta_a = 1.0;
    double beta_b = 1.0;
    double theta = 1.5707963267948966;

    // beta*omega for each side; every thermal quantity depends on the baths
    // only through these products.
    double xa() const { return beta_a * omega_a; }
    double xb() const { return beta_b * omega_b; }

    // sin^2(theta), the probability weight of the swap branch.
    double swap_weight() const;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    // Hot/cold naming convention T_A > T_B; violation is a warning, not an
    // error: all formulas stay valid with the roles exchanged.
    bool hot_cold_convention_ok() const;
};

// Partition function of d equally spaced levels at x = beta*omega:
// sum_{n=0}^{d-1} e^{-n x}. Requires x > 0, d >= 2.
double partition_function(double x, int d);

// Mean level index <n> of the same Gibbs state. Strictly decreasing in x,
// with range (0, (d-1)/2). Requires x > 0, d >= 2.
double mean_occupation(double x, int d);

// Variance of the level index at x = beta*omega. Range (0, (d^2-1)/12).
double occupation_variance(double x, int d);

// Inverse of mean_occupation in x, by bracketing + bisection. Requires
// n_target in the open interval (0, (d-1)/2).
double mean_occupation_inverse(double n_target, int d);

// First moments of work and heat over one cycle. Sign convention: W is work
// injected into the system, Q_H (Q_C) is heat released by the hot (cold)
// bath, so <W> + <Q_H> + <Q_C> = 0.
double mean_work(const EngineParams& p);
double mean_heat_hot(const EngineParams& p);
double mean_heat_cold(const EngineParams& p);

// Mean entropy production <Sigma> = -beta_a <Q_H> - beta_b <Q_C> >= 0.
double entropy_production(const EngineParams& p);

// Regime classification with relative tolerance on both boundaries
// (omega_a/omega_b near 1 and near T_A/T_B reports Boundary).
Regime classify_regime(const EngineParams& p, double rel_tol = 1e-9);

// Efficiency-style figures of merit. regime_ok reports whether the params
// actually operate in the regime the figure is meant for; the value is
// still computed from the frequency ratio.
struct EfficiencyResult {
    double value;
    bool regime_ok;
};

// Heat engine efficiency eta = -<W>/<Q_H> = 1 - omega_b/omega_a.
EfficiencyResult otto_efficiency(const EngineParams& p);

// Refrigerator coefficient of performance <Q_C>/<W> = omega_b/(omega_a-omega_b).
// Requires omega_a != omega_b.
EfficiencyResult otto_cop(const EngineParams& p);

double carnot_efficiency(const EngineParams& p);      // 1 - T_B/T_A
double carnot_cop(const EngineParams& p);             // T_B/(T_A - T_B)
double curzon_ahlborn_efficiency(const EngineParams& p); // 1 - sqrt(T_B/T_A)

// All first and second moments of (W, Q_H) plus derived quantities,
// assembled from the closed forms in one pass.
struct MomentSet {
    double mean_w = 0;
    double mean_qh = 0;
    double mean_qc = 0;
    double second_w = 0;
    double second_qh = 0;
    double var_w = 0;
    double var_qh = 0;
    double cov_w_qh = 0;
    double entropy_production = 0;
    Regime regime = Regime::Boundary;
};

MomentSet moments(const EngineParams& p);

}  // namespace qoswap
