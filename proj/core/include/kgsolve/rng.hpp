#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kgsolve {

// Stream domains keep the RNG families of the different consumers disjoint,
// so e.g. reference Monte Carlo never shares draws with the path bank even
// under the same user seed.
inline constexpr std::uint64_t kBankStream = 0x42414e4bULL;      // "BANK"
inline constexpr std::uint64_t kReferenceStream = 0x52454653ULL; // "REFS"
inline constexpr std::uint64_t kOracleStream = 0x4f52434cULL;    // "ORCL"

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent engine seed for (user seed, stream domain, sample
/// index). Samples are order-independent: stream i never depends on stream j.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= domain * 0xd1342543de82ef95ULL;
    (void)splitmix64(s);
    s ^= index * 0x2545f4914f6cdd1dULL;
    return splitmix64(s);
}

/// Standard normal sampler on a dedicated mt19937_64 stream. Uses the
/// Marsaglia polar transform rather than std::normal_distribution so the
/// draw sequence is pinned by this code, not by the standard library build.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t engine_seed) : eng_(engine_seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double uniform01() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace kgsolve
