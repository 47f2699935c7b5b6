#include "kgsolve/model.hpp"

#include <cmath>

#include "kgsolve/errors.hpp"
#include "kgsolve/model_zoo.hpp"

namespace kgsolve {

std::vector<double> default_spectrum(std::size_t d) {
    std::vector<double> a(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double kk = static_cast<double>(k + 1);
        a[k] = kk * kk;
    }
    return a;
}

void ModelSpec::validate() const {
    if (d == 0) throw ConfigError("model: d must be positive");
    if (spectrum.size() != d) throw ConfigError("model: spectrum length != d");
    for (std::size_t k = 0; k < d; ++k) {
        if (!(spectrum[k] > 0.0)) {
            throw ConfigError("model: spectrum a_" + std::to_string(k + 1) + " must be > 0");
        }
    }
    if (!(sigma > 0.0)) throw ConfigError("model: sigma must be > 0");
    if (!(horizon_T > 0.0)) throw ConfigError("model: horizon_T must be > 0");
    if (x0.size() != d) throw ConfigError("model: x0 length != d");
    for (double v : x0) {
        if (!std::isfinite(v)) throw ConfigError("model: x0 must be finite");
    }
    nonlinearity.validate();
    if (nonlinearity.kind == NonlinearityKind::constant && nonlinearity.b.size() != d) {
        throw ConfigError("model: constant drift vector length != d");
    }
    if (nonlinearity.kind == NonlinearityKind::poly_bounded && nonlinearity.ybar.size() != d) {
        throw ConfigError("model: ybar length != d");
    }
    if (initial_datum.kind == DatumKind::trig && initial_datum.h.size() != d) {
        throw ConfigError("model: trig datum h length != d");
    }
}

namespace {

// Exact-integer-ratio check with a small relative slack for the decimal
// step sizes (1e-2 / 1e-4 etc. are not exact binary ratios).
std::size_t exact_ratio(double coarse, double fine, const char* what) {
    const double r = coarse / fine;
    const double rounded = std::round(r);
    if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * rounded) {
        throw ConfigError(std::string(what) + ": " + std::to_string(fine) +
                          " does not divide " + std::to_string(coarse) + " exactly");
    }
    return static_cast<std::size_t>(rounded);
}

} // namespace

GridSpec GridSpec::make(double horizon_T, double fine_dt, double coarse_dt) {
    GridSpec g;
    g.fine_dt = fine_dt;
    g.coarse_dt = coarse_dt;
    g.n_coarse = exact_ratio(horizon_T, coarse_dt, "grid");
    g.validate(horizon_T);
    return g;
}

std::size_t GridSpec::steps_per_coarse() const {
    return exact_ratio(coarse_dt, fine_dt, "grid");
}

void GridSpec::validate(double horizon_T) const {
    if (!(fine_dt > 0.0) || !(coarse_dt > 0.0)) throw ConfigError("grid: steps must be > 0");
    if (fine_dt > coarse_dt) throw ConfigError("grid: fine_dt must be <= coarse_dt");
    (void)steps_per_coarse();
    const std::size_t n = exact_ratio(horizon_T, coarse_dt, "grid");
    if (n != n_coarse) {
        throw ConfigError("grid: n_coarse inconsistent with horizon_T / coarse_dt");
    }
}

void BoundParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("bound: delta must lie in (0,1)");
    if (!(c_delta > 0.0)) throw ConfigError("bound: c_delta must be > 0");
    if (u0_sup < 0.0 || b_sup < 0.0) throw ConfigError("bound: norms must be >= 0");
}

BoundParams bound_params_for(const ModelSpec& model) {
    BoundParams bp;
    bp.delta = 0.5;
    bp.c_delta = 1.0 / model.sigma;
    bp.u0_sup = model.initial_datum.sup_norm();
    auto bsup = sup_norm_B(model.nonlinearity, model.d);
    if (!bsup) bsup = model.nonlinearity.declared_sup;
    if (!bsup) {
        throw ConfigError("bound: B is unbounded for this kind; set declared_sup");
    }
    bp.b_sup = *bsup;
    bp.validate();
    return bp;
}

} // namespace kgsolve
