#include "kgsolve/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kgsolve {

GaussLegendre gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be > 0");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);

    // Newton iteration on P_n with the Chebyshev-angle initial guess,
    // mapped from (-1,1) to (0,1). Symmetric pairs share the computation.
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = 0.5 * (1.0 - x); // descending x -> ascending node
        gl.weights[i] = 0.5 * w;
        gl.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        gl.weights[n - 1 - i] = 0.5 * w;
    }
    return gl;
}

} // namespace kgsolve
