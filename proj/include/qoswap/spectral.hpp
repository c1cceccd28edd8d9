#pragma once

#include <complex>
#include <vector>

#include "qoswap/engine.hpp"

namespace qoswap::spectral {

// Joint characteristic function chi(lambda, mu) = <e^{i lambda W + i mu Q_H}>
// for one cycle, evaluated in the geometric-sum form. lambda and mu may be
// complex; fluctuation-theorem identities use imaginary arguments. For real
// arguments |chi| <= 1 and chi(0,0) = 1. chi depends on (lambda, mu) only
// through xi = (omega_a - omega_b) lambda - omega_a mu.
std::complex<double> characteristic_function(const EngineParams& p,
                                             std::complex<double> lambda,
                                             std::complex<double> mu);

// <W^2> from the closed form. Equals
// sin^2(theta) (omega_b-omega_a)^2 [sigma_a^2 + sigma_b^2 + (N_A-N_B)^2].
double second_moment_work(const EngineParams& p);

// Joint raw moment <W^l Q_H^s>. Orders l+s <= 2 use closed forms, orders
// 3 and 4 are summed over the exact lattice distribution. Throws
// std::domain_error for l+s > 4 or negative orders.
double joint_moment(const EngineParams& p, int l, int s);

// f(x, y, d): the ratio of the second-moment brace to the occupation
// difference brace entering the uncertainty identity. Requires x != y.
// f(x, y, 2) = coth((y-x)/2).
double snr_factor(double x, double y, int d);

// Right-hand side (y-x) f(x,y,d) / <Sigma> - 1 of the identity
// var(W)/<W>^2 = var(Q_H)/<Q_H>^2 = cov(W,Q_H)/(<W><Q_H>) = rhs.
// Requires a nondegenerate cycle (<W> != 0).
double snr_identity_rhs(const EngineParams& p);

// Exact joint distribution of (W, Q_H) over one cycle. Both variables live
// on one integer lattice n in [-(d-1), d-1]: Q_H = n omega_a and
// W = n (omega_b - omega_a) with probability prob(n).
struct WorkHeatDistribution {
    int d = 2;
    double omega_a = 1.0;
    double omega_b = 1.0;
    std::vector<double> probabilities;  // index n + (d-1)

    int min_n() const { return -(d - 1); }
    int max_n() const { return d - 1; }
    double prob(int n) const { return probabilities[static_cast<size_t>(n + d - 1)]; }
    double work(int n) const { return n * (omega_b - omega_a); }
    double heat_hot(int n) const { return n * omega_a; }
    double heat_cold(int n) const { return -n * omega_b; }
    double total() const;
    double moment(int l, int s) const;  // sum_n prob(n) W(n)^l Q_H(n)^s
};

WorkHeatDistribution joint_distribution(const EngineParams& p);

// Detailed fluctuation theorem p(n)/p(-n) = e^{(x_b - x_a) n} checked over
// every lattice pair with both probabilities above the floor.
struct DetailedFtReport {
    double max_abs_residual = 0;  // max |log ratio - (x_b - x_a) n|
    int pairs_checked = 0;
    int pairs_below_floor = 0;
};

DetailedFtReport verify_detailed_ft(const EngineParams& p, double floor = 1e-300);

// The ratio -W/Q_H is the same constant 1 - omega_b/omega_a at every
// supported lattice point with n != 0: efficiency does not fluctuate.
struct EfficiencyFluctuationReport {
    bool nonfluctuating = true;
    double efficiency = 0;         // the common ratio
    double max_abs_deviation = 0;  // over supported n != 0
};

EfficiencyFluctuationReport efficiency_is_nonfluctuating(const EngineParams& p);

}  // namespace qoswap::spectral
