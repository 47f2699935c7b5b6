#pragma once

#include <cstddef>

#include "kgsolve/model.hpp"

namespace kgsolve {

// Closed-form covariance algebra for one spectral component of the diagonal
// OU model dZ = -a Z dt + dW, with the noise strength sigma applied on top:
//
//   (Q_t)_kk        = sigma^2 (1 - e^{-2ta}) / (2a)
//   (Q_t^{-1/2})_kk = sqrt(2a) / (sigma sqrt(1 - e^{-2ta}))
//   (e^{tA})_kk     = e^{-ta}
//   Lambda(t)_kk    = sqrt(2a) e^{-ta} / (sigma sqrt(1 - e^{-2ta}))
//   Xi_sigma(t)_kk  = sigma (Q_t)^{-1}_kk e^{-ta}
//
// All of these except the semigroup are singular at t = 0 and throw
// std::domain_error for t <= 0.

double ou_variance(double t, double a, double sigma);
double ou_inv_sqrt_variance(double t, double a, double sigma);
double ou_semigroup(double t, double a); // t >= 0
double ou_lambda(double t, double a, double sigma);
double ou_xi(double t, double a, double sigma);

// ModelSpec-level accessors; k_index is the 1-based spectral index of a_k.

double qt_diag(double t, std::size_t k_index, const ModelSpec& model);
double qt_inv_sqrt_diag(double t, std::size_t k_index, const ModelSpec& model);
double semigroup_diag(double t, std::size_t k_index, const ModelSpec& model);
double lambda_diag(double t, std::size_t k_index, const ModelSpec& model);
double xi_diag(double t, std::size_t k_index, const ModelSpec& model);

} // namespace kgsolve
