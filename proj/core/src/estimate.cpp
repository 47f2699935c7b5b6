#include "kgsolve/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace kgsolve {

namespace {

double chunked_sum(std::span<const double> v) {
    double total = 0.0;
    for (std::size_t begin = 0; begin < v.size(); begin += kReductionChunk) {
        const std::size_t end = std::min(begin + kReductionChunk, v.size());
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) partial += v[i];
        total += partial;
    }
    return total;
}

} // namespace

Estimate estimate_from_samples(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("estimate: no samples");
    const auto n = values.size();
    Estimate est;
    est.n_samples = n;
    est.mean = chunked_sum(values) / static_cast<double>(n);
    if (n < 2) return est;

    double ss = 0.0;
    for (std::size_t begin = 0; begin < n; begin += kReductionChunk) {
        const std::size_t end = std::min(begin + kReductionChunk, n);
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double dev = values[i] - est.mean;
            partial += dev * dev;
        }
        ss += partial;
    }
    const double var = ss / static_cast<double>(n - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n));
    return est;
}

} // namespace kgsolve
