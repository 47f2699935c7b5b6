#include "kgsolve/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "kgsolve/errors.hpp"
#include "kgsolve/model_zoo.hpp"

namespace kgsolve {

void euler_maruyama_path(const ModelSpec& model, std::span<const double> x,
                         const GridSpec& grid, NormalSampler& normal,
                         std::span<double> out) {
    const std::size_t d = model.d;
    if (x.size() != d) throw std::invalid_argument("euler_maruyama: x length != d");
    if (out.size() != grid.n_nodes() * d) {
        throw std::invalid_argument("euler_maruyama: output size != n_nodes * d");
    }

    const double dt = grid.fine_dt;
    const double noise = model.sigma * std::sqrt(dt);
    const std::size_t per_coarse = grid.steps_per_coarse();

    std::vector<double> state(x.begin(), x.end());
    std::vector<double> drift(d);
    std::memcpy(out.data(), state.data(), d * sizeof(double));

    for (std::size_t j = 1; j < grid.n_nodes(); ++j) {
        for (std::size_t m = 0; m < per_coarse; ++m) {
            eval_B(model.nonlinearity, state, drift);
            for (std::size_t k = 0; k < d; ++k) {
                state[k] += (-model.spectrum[k] * state[k] + drift[k]) * dt + noise * normal();
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            if (!std::isfinite(state[k])) {
                throw NumericError("euler_maruyama: path blew up near step " +
                                   std::to_string(j * per_coarse) + " (node " +
                                   std::to_string(j) + ", component " + std::to_string(k + 1) + ")");
            }
        }
        std::memcpy(out.data() + j * d, state.data(), d * sizeof(double));
    }
}

ReferenceRun mc_reference(const ModelSpec& model, const GridSpec& grid,
                          std::size_t n_samples, std::uint64_t seed) {
    model.validate();
    grid.validate(model.horizon_T);
    if (n_samples == 0) throw ConfigError("reference: n_samples must be > 0");
    for (std::size_t k = 0; k < model.d; ++k) {
        if (model.spectrum[k] * grid.fine_dt >= 2.0) {
            throw ConfigError("reference: Euler step unstable for a_" + std::to_string(k + 1) +
                              " = " + std::to_string(model.spectrum[k]) +
                              " at fine_dt = " + std::to_string(grid.fine_dt));
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n_nodes = grid.n_nodes();

    std::vector<double> path(n_nodes * model.d);
    std::vector<double> u0_values(n_samples * n_nodes);
    for (std::size_t s = 0; s < n_samples; ++s) {
        NormalSampler normal(stream_seed(seed, kReferenceStream, s));
        euler_maruyama_path(model, model.x0, grid, normal, path);
        for (std::size_t j = 0; j < n_nodes; ++j) {
            u0_values[s * n_nodes + j] = eval_u0(
                model.initial_datum, std::span<const double>(path.data() + j * model.d, model.d));
        }
    }

    ReferenceRun run;
    run.fine_dt = grid.fine_dt;
    run.n_samples = n_samples;
    run.seed = seed;
    run.u.resize(n_nodes);
    std::vector<double> column(n_samples);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        for (std::size_t s = 0; s < n_samples; ++s) column[s] = u0_values[s * n_nodes + j];
        run.u[j] = estimate_from_samples(column);
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

double closed_form_constant_drift(const ModelSpec& model, double t, std::span<const double> x) {
    if (model.nonlinearity.kind != NonlinearityKind::constant) {
        throw ConfigError("closed form: nonlinearity kind must be constant");
    }
    if (model.initial_datum.kind != DatumKind::trig) {
        throw ConfigError("closed form: initial datum kind must be trig");
    }
    if (x.size() != model.d) throw std::invalid_argument("closed form: x length != d");
    if (!(t >= 0.0)) throw std::domain_error("closed form: t must be >= 0");

    const auto& h = model.initial_datum.h;
    const auto& b = model.nonlinearity.b;
    double dot = 0.0, quad = 0.0;
    for (std::size_t k = 0; k < model.d; ++k) {
        const double a = model.spectrum[k];
        const double mean = std::exp(-a * t) * x[k] + b[k] * (-std::expm1(-a * t)) / a;
        const double qtil = t > 0.0 ? -std::expm1(-2.0 * a * t) / (2.0 * a) : 0.0;
        dot += h[k] * mean;
        quad += h[k] * qtil * h[k];
    }
    return std::cos(dot) * std::exp(-model.sigma * model.sigma * quad / 2.0);
}

} // namespace kgsolve
