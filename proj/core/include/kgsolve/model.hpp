#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kgsolve/model_zoo.hpp"

namespace kgsolve {

/// Spectrum a_k = k^2, k = 1..d (the Dirichlet Laplacian eigenvalues in the
/// diagonal model A = diag(-a_k)).
std::vector<double> default_spectrum(std::size_t d);

/// One problem instance: diagonal linear part, noise strength, nonlinearity,
/// initial datum, evaluation point and horizon.
struct ModelSpec {
    std::size_t d = 10;
    std::vector<double> spectrum; // a_k > 0; A = diag(-a_k)
    double sigma = 1.0;
    double horizon_T = 1.0;
    Nonlinearity nonlinearity;
    InitialDatum initial_datum;
    std::vector<double> x0; // evaluation point, length d

    void validate() const; // throws ConfigError
};

/// Mixed-time-step grid: paths are simulated at fine_dt and the iteration
/// quadrature runs on the coarse nodes t_j = j * coarse_dt, j = 0..n_coarse.
struct GridSpec {
    double fine_dt = 1e-4;
    double coarse_dt = 1e-2;
    std::size_t n_coarse = 100; // N_t = T / coarse_dt

    /// Build from the step sizes, checking exact divisibility of both ratios.
    static GridSpec make(double horizon_T, double fine_dt, double coarse_dt);

    std::size_t steps_per_coarse() const;
    std::size_t n_nodes() const { return n_coarse + 1; }
    double node_time(std::size_t j) const { return static_cast<double>(j) * coarse_dt; }

    void validate(double horizon_T) const; // throws ConfigError
};

/// Inputs of the Gamma-function series bound: ||Lambda(t)|| <= c_delta / t^delta.
struct BoundParams {
    double delta = 0.5;
    double c_delta = 1.0;
    double u0_sup = 1.0;
    double b_sup = 1.0;

    void validate() const;
};

/// Bound parameters for the diagonal OU model: delta = 1/2 and
/// c_delta = 1/sigma (sup_u sqrt(2u) e^-u / sqrt(1-e^-2u) = 1), with sup
/// norms taken from the model (or the declared surrogate for unbounded B).
/// Throws ConfigError when B is unbounded and no surrogate is declared.
BoundParams bound_params_for(const ModelSpec& model);

} // namespace kgsolve
