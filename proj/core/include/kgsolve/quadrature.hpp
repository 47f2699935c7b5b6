#pragma once

#include <cstddef>
#include <vector>

namespace kgsolve {

/// Gauss-Legendre rule mapped to (0, 1).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t n);

} // namespace kgsolve
