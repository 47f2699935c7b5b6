#pragma once

#include <cstddef>
#include <span>

namespace kgsolve {

/// A Monte Carlo mean with its standard error (sample sd / sqrt(n)).
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

/// Mean and standard error over the given per-sample values.
///
/// Summation is chunked at a fixed width and the chunk partials are combined
/// in index order, so the result is bit-stable and independent of how callers
/// partition the samples across workers.
Estimate estimate_from_samples(std::span<const double> values);

inline constexpr std::size_t kReductionChunk = 4096;

} // namespace kgsolve
