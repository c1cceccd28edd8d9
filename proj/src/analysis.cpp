#include "qoswap/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "detail_math.hpp"

namespace qoswap::analysis {

namespace {

// var(W) <Sigma> / <W>^2 depends only on (x_a, x_b, d, sin^2 theta); the
// frequency split cancels. Equals (x_b - x_a) C / gap with
// C = sigma_a^2 + sigma_b^2 + cos^2(theta) gap^2.
double ratio_from_x(double xa, double xb, int d, double s2) {
    double gap = detail::occupation_kernel(xa, d) - detail::occupation_kernel(xb, d);
    double c = detail::variance_kernel(xa, d) + detail::variance_kernel(xb, d) +
               (1.0 - s2) * gap * gap;
    return (xb - xa) * c / gap;
}

void require_swap(double s2, const char* fn) {
    if (!(s2 > 0.0))
        throw std::domain_error(std::string(fn) + ": requires a nonzero swap weight");
}

void require_levels(int d, const char* fn) {
    if (d < 2) throw std::domain_error(std::string(fn) + ": d must be >= 2");
}

}  // namespace

TurCheck tur_bound_check(const EngineParams& p, double tol) {
    p.validate();
    MomentSet m = moments(p);
    if (m.mean_w == 0.0)
        throw std::domain_error("tur_bound_check: requires nonzero mean work");
    if (!(m.entropy_production > 0.0))
        throw std::domain_error("tur_bound_check: requires positive entropy production");
    TurCheck out;
    out.lhs = m.var_w / (m.mean_w * m.mean_w);
    out.entropy_production = m.entropy_production;
    out.rhs_bound = 2.0 / m.entropy_production - 1.0;
    out.rhs_standard = 2.0 / m.entropy_production;
    out.ratio = out.lhs * m.entropy_production;
    out.bound_ok = out.lhs >= out.rhs_bound -
                                  tol * std::max(1.0, std::abs(out.rhs_bound));
    out.standard_violated = out.ratio < 2.0;
    return out;
}

double ultimate_snr_limit(int d, double theta) {
    require_levels(d, "ultimate_snr_limit");
    double s = std::sin(theta);
    double s2 = s * s;
    require_swap(s2, "ultimate_snr_limit");
    return (d + 1 + 3.0 * (d - 1) * (1.0 - s2)) / (3.0 * (d - 1) * s2);
}

GoldenResult golden_min(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_iter) {
    if (!(a < b)) throw std::invalid_argument("golden_min: requires a < b");
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    GoldenResult r;
    r.evaluations = 2;
    auto tight = [&] { return b - a <= rel_tol * (std::abs(a) + std::abs(b) + 1e-12); };
    for (int i = 0; i < max_iter && !tight(); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        ++r.evaluations;
    }
    r.converged = tight();
    if (f1 <= f2) {
        r.x = x1;
        r.value = f1;
    } else {
        r.x = x2;
        r.value = f2;
    }
    return r;
}

MaxWorkResult efficiency_at_max_work(int d, double tb_over_ta, double theta) {
    require_levels(d, "efficiency_at_max_work");
    if (!(tb_over_ta > 0.0) || !(tb_over_ta < 1.0))
        throw std::domain_error("efficiency_at_max_work: requires 0 < T_B/T_A < 1");
    double s = std::sin(theta);
    double s2 = s * s;
    require_swap(s2, "efficiency_at_max_work");

    const double r = tb_over_ta;
    const double eta_c = 1.0 - r;
    const double lx_lo = std::log(1e-6), lx_hi = std::log(50.0);

    // Work output per unit swap weight at T_B = 1, omega_b = x / beta_b = x.
    auto work = [&](double eta, double lx) {
        double x = std::exp(lx);
        return x * eta / (1.0 - eta) *
               (detail::occupation_kernel(r * x / (1.0 - eta), d) -
                detail::occupation_kernel(x, d));
    };

    // Coarse prescan brackets the outer golden section in eta.
    const int grid = 200;
    int best_i = 0;
    double best = -1.0;
    for (int i = 0; i < grid; ++i) {
        double eta = eta_c * (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            double lx = lx_lo + (lx_hi - lx_lo) * (j + 0.5) / grid;
            double w = work(eta, lx);
            if (w > best) {
                best = w;
                best_i = i;
            }
        }
    }

    auto best_over_x = [&](double eta) {
        return golden_min([&](double lx) { return -work(eta, lx); }, lx_lo,
                          lx_hi, 1e-9);
    };
    double eta_lo = eta_c * (best_i - 0.5) / grid;
    double eta_hi = eta_c * (best_i + 1.5) / grid;
    if (eta_lo <= 0.0) eta_lo = eta_c * 1e-9;
    if (eta_hi >= eta_c) eta_hi = eta_c * (1.0 - 1e-9);
    GoldenResult outer = golden_min(
        [&](double eta) { return best_over_x(eta).value; }, eta_lo, eta_hi, 1e-9);
    GoldenResult inner = best_over_x(outer.x);

    MaxWorkResult out;
    out.d = d;
    out.tb_over_ta = r;
    out.eta_ca = 1.0 - std::sqrt(r);
    out.eta_carnot = eta_c;
    out.eta_m = outer.x;
    out.x_opt = std::exp(inner.x);
    out.w_max = s2 * -inner.value;
    out.converged = outer.converged && inner.converged;
    return out;
}

EfficiencyBoundCheck efficiency_bound_check(const EngineParams& p, double tol) {
    p.validate();
    MomentSet m = moments(p);
    if (m.second_w == 0.0)
        throw std::domain_error("efficiency_bound_check: requires nonzero work fluctuations");
    EfficiencyBoundCheck out;
    out.eta = 1.0 - p.omega_b / p.omega_a;
    out.eta_carnot = carnot_efficiency(p);
    double tb = 1.0 / p.beta_b;
    out.bound = out.eta_carnot / (1.0 + 2.0 * tb * (-m.mean_w) / m.second_w);
    out.ok = out.eta <= out.bound + tol * std::max(1.0, std::abs(out.bound));
    out.regime_ok = m.regime == Regime::HeatEngine;
    return out;
}

ViolationSearch strongest_standard_violation(int d, double theta, double x_a_pin,
                                             double lo, double hi) {
    require_levels(d, "strongest_standard_violation");
    double s = std::sin(theta);
    double s2 = s * s;
    require_swap(s2, "strongest_standard_violation");
    if (!(x_a_pin > 0.0))
        throw std::domain_error("strongest_standard_violation: pin must be positive");
    if (!(lo < hi))
        throw std::domain_error("strongest_standard_violation: requires lo < hi");
    GoldenResult g = golden_min(
        [&](double xb) { return ratio_from_x(x_a_pin, xb, d, s2); }, lo, hi, 1e-10);
    return {x_a_pin, g.x, g.value, g.converged};
}

double GridAxis::at(int i) const {
    if (i < 0) i = 0;
    if (i >= points) i = points - 1;
    if (points == 1) return min;
    double t = static_cast<double>(i) / (points - 1);
    return log_scale ? min * std::pow(max / min, t) : min + (max - min) * t;
}

void tur_scan(int d, double theta, const GridAxis& a, const GridAxis& b,
              const std::function<void(const TurScanRow&)>& emit) {
    require_levels(d, "tur_scan");
    double s = std::sin(theta);
    double s2 = s * s;
    require_swap(s2, "tur_scan");
    for (int i = 0; i < a.points; ++i) {
        double xa = a.at(i);
        for (int j = 0; j < b.points; ++j) {
            double xb = b.at(j);
            TurScanRow row;
            row.x_a = xa;
            row.x_b = xb;
            if (xa == xb) {
                row.degenerate = true;
                row.ratio = std::numeric_limits<double>::quiet_NaN();
            } else {
                row.ratio = ratio_from_x(xa, xb, d, s2);
                row.standard_violated = row.ratio < 2.0;
            }
            emit(row);
        }
    }
}

long violation_count(int d, double theta, const GridAxis& a, const GridAxis& b) {
    long count = 0;
    tur_scan(d, theta, a, b, [&](const TurScanRow& row) {
        if (!row.degenerate && row.standard_violated) ++count;
    });
    return count;
}

GridAxis violation_measure_axis() { return {1e-2, 1e1, 400, true}; }

}  // namespace qoswap::analysis
