#pragma once

#include <cstdint>
#include <vector>

#include "qoswap/engine.hpp"
#include "qoswap/spectral.hpp"

namespace qoswap::tpm {

// SplitMix64: the counter-based 64-bit generator of Steele, Lea and
// Flood (output mix of Stafford's MurmurHash3 variant 13). One state
// increment per draw makes substreams trivially derivable by seeding,
// which is what the chunked sampler relies on. This is the documented
// generator contract: identical seeds give identical streams on every
// platform, independent of thread count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 significant bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Mix a stream index into a base seed to derive an independent substream.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

// Two-point-measurement transition probability q(l, s | n, m): probability
// that the final measurement reads (l, s) given the initial one read (n, m),
// under the partial swap of angle theta. Indices must lie in [0, d).
double transition_probability(const EngineParams& p, int l, int s, int n, int m);

// Exact exhaustive enumeration of the two-point-measurement protocol,
// folded onto the (W, Q_H) lattice. O(d^2); capped at d <= 64.
spectral::WorkHeatDistribution enumerate_joint(const EngineParams& p);

// Monte Carlo sample of the protocol. Every per-sample observable is a
// function of the lattice index, so the histogram is a sufficient
// statistic; moment estimates and standard errors derive from it.
struct EmpiricalStats {
    std::uint64_t count = 0;
    int d = 2;
    double omega_a = 1.0;
    double omega_b = 1.0;
    std::vector<std::uint64_t> lattice_counts;  // index n + (d-1)

    double prob(int n) const {
        return static_cast<double>(lattice_counts[static_cast<size_t>(n + d - 1)]) /
               static_cast<double>(count);
    }

    double mean_w = 0, sem_w = 0;
    double mean_qh = 0, sem_qh = 0;
    double second_w = 0, sem_second_w = 0;
    // Estimate of <e^{-Sigma}> with its standard error; the exact value is 1.
    double jarzynski = 0, sem_jarzynski = 0;
};

// Deterministic given (params, count, seed): sampling is chunked with a
// fixed chunk size and per-chunk derived seeds, and chunks are merged in
// index order, so the result is bit-identical for every jobs value.
EmpiricalStats sample(const EngineParams& p, std::uint64_t count,
                      std::uint64_t seed, int jobs = 1);

}  // namespace qoswap::tpm
