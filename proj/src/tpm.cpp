#include "qoswap/tpm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qoswap::tpm {

namespace {

constexpr std::uint64_t kChunk = 65536;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Cumulative unnormalized Gibbs weights sum_{j<=n} e^{-j x}.
std::vector<double> cumulative_weights(double x, int d) {
    std::vector<double> cum(static_cast<size_t>(d));
    double acc = 0;
    for (int j = 0; j < d; ++j) {
        acc += std::exp(-j * x);
        cum[static_cast<size_t>(j)] = acc;
    }
    return cum;
}

int invert_cdf(const std::vector<double>& cum, double u) {
    double t = u * cum.back();
    return static_cast<int>(std::upper_bound(cum.begin(), cum.end(), t) -
                            cum.begin());
}

struct MomentAccumulator {
    double sum = 0, sum_sq = 0;

    void from_histogram(const std::vector<std::uint64_t>& counts, int d,
                        double (*value)(int, double), double scale) {
        sum = sum_sq = 0;
        for (int n = -(d - 1); n <= d - 1; ++n) {
            std::uint64_t c = counts[static_cast<size_t>(n + d - 1)];
            if (c == 0) continue;  // skips 0 * inf for unreachable bins
            double v = value(n, scale);
            sum += static_cast<double>(c) * v;
            sum_sq += static_cast<double>(c) * v * v;
        }
    }

    void finish(std::uint64_t count, double& mean, double& sem) const {
        double n = static_cast<double>(count);
        mean = sum / n;
        double var = sum_sq / n - mean * mean;
        sem = var > 0 ? std::sqrt(var / n) : 0.0;
    }
};

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(seed + stream * kGolden).next();
}

double transition_probability(const EngineParams& p, int l, int s, int n, int m) {
    p.validate();
    for (int idx : {l, s, n, m})
        if (idx < 0 || idx >= p.d)
            throw std::out_of_range("transition_probability: index outside [0, d)");
    double s2 = p.swap_weight();
    double q = 0;
    if (l == n && s == m) q += 1.0 - s2;
    if (l == m && s == n) q += s2;
    return q;
}

spectral::WorkHeatDistribution enumerate_joint(const EngineParams& p) {
    p.validate();
    if (p.d > 64)
        throw std::domain_error("enumerate_joint: exhaustive enumeration capped at d <= 64");
    double s2 = p.swap_weight();
    double c2 = 1.0 - s2;
    auto cum_a = cumulative_weights(p.xa(), p.d);
    auto cum_b = cumulative_weights(p.xb(), p.d);
    double za = cum_a.back(), zb = cum_b.back();

    spectral::WorkHeatDistribution out;
    out.d = p.d;
    out.omega_a = p.omega_a;
    out.omega_b = p.omega_b;
    out.probabilities.assign(static_cast<size_t>(2 * p.d - 1), 0.0);
    size_t zero = static_cast<size_t>(p.d - 1);
    for (int n = 0; n < p.d; ++n) {
        double wa = std::exp(-n * p.xa()) / za;
        for (int m = 0; m < p.d; ++m) {
            double w0 = wa * (std::exp(-m * p.xb()) / zb);
            out.probabilities[zero] += w0 * c2;
            out.probabilities[static_cast<size_t>(n - m + p.d - 1)] += w0 * s2;
        }
    }
    return out;
}

EmpiricalStats sample(const EngineParams& p, std::uint64_t count,
                      std::uint64_t seed, int jobs) {
    p.validate();
    if (count == 0) throw std::invalid_argument("sample: count must be positive");
    if (jobs < 1) throw std::invalid_argument("sample: jobs must be >= 1");

    double s2 = p.swap_weight();
    auto cum_a = cumulative_weights(p.xa(), p.d);
    auto cum_b = cumulative_weights(p.xb(), p.d);
    size_t bins = static_cast<size_t>(2 * p.d - 1);
    std::uint64_t chunks = (count + kChunk - 1) / kChunk;

    // Chunk c draws from SplitMix64(derive_stream_seed(seed, c)); per sample
    // the order is u_a, u_b, u_coin. Counts are integers, so the merge is
    // exact whatever the thread partition: the result depends only on
    // (params, count, seed).
    auto run_chunk = [&](std::uint64_t c, std::vector<std::uint64_t>& counts) {
        SplitMix64 rng(derive_stream_seed(seed, c));
        std::uint64_t todo = std::min(kChunk, count - c * kChunk);
        for (std::uint64_t i = 0; i < todo; ++i) {
            int n = invert_cdf(cum_a, rng.uniform());
            int m = invert_cdf(cum_b, rng.uniform());
            bool swap = rng.uniform() < s2;
            counts[static_cast<size_t>((swap ? n - m : 0) + p.d - 1)] += 1;
        }
    };

    std::vector<std::uint64_t> merged(bins, 0);
    int workers = static_cast<int>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(jobs), chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c, merged);
    } else {
        std::vector<std::vector<std::uint64_t>> partial(
            static_cast<size_t>(workers), std::vector<std::uint64_t>(bins, 0));
        std::atomic<std::uint64_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t c = cursor.fetch_add(1); c < chunks;
                     c = cursor.fetch_add(1))
                    run_chunk(c, partial[static_cast<size_t>(w)]);
            });
        for (auto& t : pool) t.join();
        for (const auto& part : partial)
            for (size_t i = 0; i < bins; ++i) merged[i] += part[i];
    }

    EmpiricalStats stats;
    stats.count = count;
    stats.d = p.d;
    stats.omega_a = p.omega_a;
    stats.omega_b = p.omega_b;
    stats.lattice_counts = std::move(merged);

    MomentAccumulator acc;
    double dw = p.omega_b - p.omega_a;
    acc.from_histogram(stats.lattice_counts, p.d,
                       [](int n, double scale) { return n * scale; }, dw);
    acc.finish(count, stats.mean_w, stats.sem_w);
    acc.from_histogram(stats.lattice_counts, p.d,
                       [](int n, double scale) { return n * scale; }, p.omega_a);
    acc.finish(count, stats.mean_qh, stats.sem_qh);
    acc.from_histogram(stats.lattice_counts, p.d,
                       [](int n, double scale) { return n * n * scale * scale; },
                       dw);
    acc.finish(count, stats.second_w, stats.sem_second_w);
    acc.from_histogram(stats.lattice_counts, p.d,
                       [](int n, double scale) { return std::exp(-n * scale); },
                       p.xb() - p.xa());
    acc.finish(count, stats.jarzynski, stats.sem_jarzynski);
    return stats;
}

}  // namespace qoswap::tpm
