#include "qoswap/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "detail_math.hpp"

namespace qoswap::spectral {

namespace {

using cplx = std::complex<double>;

// Powers of the lattice value with integer exponent, exact for small l.
double ipow(double base, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}

}  // namespace

std::complex<double> characteristic_function(const EngineParams& p, cplx lambda,
                                             cplx mu) {
    p.validate();
    double s2 = p.swap_weight();
    double c2 = 1.0 - s2;
    cplx xi = (p.omega_a - p.omega_b) * lambda - p.omega_a * mu;
    cplx i_xi(-xi.imag(), xi.real());
    cplx ga = detail::geometric_ratio(cplx(p.xa()) + i_xi, p.d);
    cplx gb = detail::geometric_ratio(cplx(p.xb()) - i_xi, p.d);
    double za = detail::geometric_ratio(p.xa(), p.d);
    double zb = detail::geometric_ratio(p.xb(), p.d);
    return c2 + s2 * ga * gb / (za * zb);
}

double second_moment_work(const EngineParams& p) {
    return moments(p).second_w;
}

double joint_moment(const EngineParams& p, int l, int s) {
    if (l < 0 || s < 0)
        throw std::domain_error("joint_moment: orders must be nonnegative");
    if (l + s > 4)
        throw std::domain_error("joint_moment: total order capped at 4");
    if (l + s == 0) return 1.0;
    MomentSet m = moments(p);
    if (l + s == 1) return l == 1 ? m.mean_w : m.mean_qh;
    if (l + s == 2) {
        if (l == 2) return m.second_w;
        if (s == 2) return m.second_qh;
        return m.cov_w_qh + m.mean_w * m.mean_qh;
    }
    return joint_distribution(p).moment(l, s);
}

double snr_factor(double x, double y, int d) {
    if (x == y) throw std::domain_error("snr_factor: requires x != y");
    double gap = detail::occupation_kernel(x, d) - detail::occupation_kernel(y, d);
    double m2 = detail::variance_kernel(x, d) + detail::variance_kernel(y, d) +
                gap * gap;
    return m2 / gap;
}

double snr_identity_rhs(const EngineParams& p) {
    p.validate();
    double xa = p.xa(), xb = p.xb();
    if (xa == xb)
        throw std::domain_error("snr_identity_rhs: requires x_a != x_b");
    if (p.swap_weight() == 0.0)
        throw std::domain_error("snr_identity_rhs: requires a nonzero swap weight");
    double sigma = qoswap::entropy_production(p);
    return (xb - xa) * snr_factor(xa, xb, p.d) / sigma - 1.0;
}

double WorkHeatDistribution::total() const {
    double t = 0;
    for (double v : probabilities) t += v;
    return t;
}

double WorkHeatDistribution::moment(int l, int s) const {
    double acc = 0;
    for (int n = min_n(); n <= max_n(); ++n)
        acc += prob(n) * ipow(work(n), l) * ipow(heat_hot(n), s);
    return acc;
}

WorkHeatDistribution joint_distribution(const EngineParams& p) {
    p.validate();
    WorkHeatDistribution out;
    out.d = p.d;
    out.omega_a = p.omega_a;
    out.omega_b = p.omega_b;
    out.probabilities.assign(static_cast<size_t>(2 * p.d - 1), 0.0);
    double s2 = p.swap_weight();
    double za = detail::geometric_ratio(p.xa(), p.d);
    double zb = detail::geometric_ratio(p.xb(), p.d);
    double norm = s2 / (za * zb);
    double xsum = p.xa() + p.xb();
    for (int n = -(p.d - 1); n <= p.d - 1; ++n) {
        double tail = n >= 0 ? std::exp(-p.xa() * n) : std::exp(p.xb() * n);
        out.probabilities[static_cast<size_t>(n + p.d - 1)] =
            norm * detail::geometric_ratio(xsum, p.d - std::abs(n)) * tail;
    }
    out.probabilities[static_cast<size_t>(p.d - 1)] += 1.0 - s2;
    return out;
}

DetailedFtReport verify_detailed_ft(const EngineParams& p, double floor) {
    auto dist = joint_distribution(p);
    double gap = p.xb() - p.xa();
    DetailedFtReport report;
    for (int n = 1; n <= dist.max_n(); ++n) {
        double plus = dist.prob(n), minus = dist.prob(-n);
        if (plus < floor || minus < floor) {
            ++report.pairs_below_floor;
            continue;
        }
        double residual = std::log(plus / minus) - gap * n;
        report.max_abs_residual = std::max(report.max_abs_residual,
                                           std::abs(residual));
        ++report.pairs_checked;
    }
    return report;
}

EfficiencyFluctuationReport efficiency_is_nonfluctuating(const EngineParams& p) {
    auto dist = joint_distribution(p);
    EfficiencyFluctuationReport report;
    report.efficiency = 1.0 - p.omega_b / p.omega_a;
    for (int n = dist.min_n(); n <= dist.max_n(); ++n) {
        if (n == 0 || dist.prob(n) <= 0.0) continue;
        double eta = -dist.work(n) / dist.heat_hot(n);
        report.max_abs_deviation = std::max(report.max_abs_deviation,
                                            std::abs(eta - report.efficiency));
    }
    report.nonfluctuating = report.max_abs_deviation <=
                            1e-12 * std::max(1.0, std::abs(report.efficiency));
    return report;
}

}  // namespace qoswap::spectral
