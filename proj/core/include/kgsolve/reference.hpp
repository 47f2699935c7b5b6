#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kgsolve/estimate.hpp"
#include "kgsolve/model.hpp"
#include "kgsolve/rng.hpp"

namespace kgsolve {

/// Direct Euler-Maruyama Monte Carlo of the nonlinear SDE, the ground truth
/// everything else is compared against.
struct ReferenceRun {
    std::vector<Estimate> u; // u_ref(t_j, x) per coarse node
    double fine_dt = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// One Euler-Maruyama path of dX = (AX + B(X)) dt + sigma dW from x,
/// recorded at the coarse nodes: out holds n_nodes * d values, node-major.
/// Throws NumericError naming the step if the path blows up.
void euler_maruyama_path(const ModelSpec& model, std::span<const double> x,
                         const GridSpec& grid, NormalSampler& normal,
                         std::span<double> out);

/// u_ref(t_j, x) = (1/N_s) sum_i u0(X^{x,i}(t_j)), with standard errors.
/// Uses its own RNG stream family, independent of any bank's.
ReferenceRun mc_reference(const ModelSpec& model, const GridSpec& grid,
                          std::size_t n_samples, std::uint64_t seed);

/// Analytic solution for B = constant b and u0 = trig(h):
/// cos(<h, m_t>) exp(-sigma^2 <h, Q_t h> / 2) with
/// m_{t,k} = e^{-a_k t} x_k + b_k (1 - e^{-a_k t}) / a_k and the sigma-free
/// (Q_t)_kk = (1 - e^{-2 a_k t}) / (2 a_k). Throws ConfigError on other kinds.
double closed_form_constant_drift(const ModelSpec& model, double t, std::span<const double> x);

} // namespace kgsolve
