#include "kgsolve/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kgsolve {

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0)) {
        throw std::domain_error("Q_t is singular at t = " + std::to_string(t) +
                                "; these kernels need t > 0");
    }
}

double spectrum_at(const ModelSpec& model, std::size_t k_index) {
    if (k_index < 1 || k_index > model.d) {
        throw std::out_of_range("spectral index k = " + std::to_string(k_index) +
                                " outside 1.." + std::to_string(model.d));
    }
    return model.spectrum[k_index - 1];
}

} // namespace

double ou_variance(double t, double a, double sigma) {
    require_positive_time(t);
    // -expm1 keeps 1 - e^{-2ta} accurate for small ta
    return sigma * sigma * (-std::expm1(-2.0 * t * a)) / (2.0 * a);
}

double ou_inv_sqrt_variance(double t, double a, double sigma) {
    require_positive_time(t);
    return std::sqrt(2.0 * a) / (sigma * std::sqrt(-std::expm1(-2.0 * t * a)));
}

double ou_semigroup(double t, double a) {
    if (t < 0.0) throw std::domain_error("semigroup needs t >= 0");
    return std::exp(-t * a);
}

double ou_lambda(double t, double a, double sigma) {
    require_positive_time(t);
    return std::sqrt(2.0 * a) * std::exp(-t * a) /
           (sigma * std::sqrt(-std::expm1(-2.0 * t * a)));
}

double ou_xi(double t, double a, double sigma) {
    require_positive_time(t);
    return sigma * std::exp(-t * a) / ou_variance(t, a, sigma);
}

double qt_diag(double t, std::size_t k_index, const ModelSpec& model) {
    return ou_variance(t, spectrum_at(model, k_index), model.sigma);
}

double qt_inv_sqrt_diag(double t, std::size_t k_index, const ModelSpec& model) {
    return ou_inv_sqrt_variance(t, spectrum_at(model, k_index), model.sigma);
}

double semigroup_diag(double t, std::size_t k_index, const ModelSpec& model) {
    return ou_semigroup(t, spectrum_at(model, k_index));
}

double lambda_diag(double t, std::size_t k_index, const ModelSpec& model) {
    return ou_lambda(t, spectrum_at(model, k_index), model.sigma);
}

double xi_diag(double t, std::size_t k_index, const ModelSpec& model) {
    return ou_xi(t, spectrum_at(model, k_index), model.sigma);
}

} // namespace kgsolve
