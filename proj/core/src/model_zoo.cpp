#include "kgsolve/model_zoo.hpp"

#include <cmath>
#include <numeric>

#include "kgsolve/errors.hpp"

namespace kgsolve {

namespace {

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_dim(std::span<const double> x, std::size_t want, const char* what) {
    if (want != 0 && x.size() != want) {
        throw ConfigError(std::string(what) + ": dimension mismatch (got " +
                          std::to_string(x.size()) + ", expected " + std::to_string(want) + ")");
    }
}

} // namespace

Nonlinearity Nonlinearity::zero() {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::zero;
    return nl;
}

Nonlinearity Nonlinearity::constant(std::vector<double> b) {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::constant;
    nl.b = std::move(b);
    return nl;
}

Nonlinearity Nonlinearity::sine() {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::sine;
    return nl;
}

Nonlinearity Nonlinearity::sine_skew(std::optional<double> declared_sup) {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::sine_skew;
    nl.declared_sup = declared_sup;
    return nl;
}

Nonlinearity Nonlinearity::poly_bounded(std::vector<double> ybar, double p) {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::poly_bounded;
    nl.ybar = std::move(ybar);
    nl.p = p;
    return nl;
}

void Nonlinearity::validate() const {
    if (kind == NonlinearityKind::poly_bounded) {
        if (p < 1.0) throw ConfigError("poly_bounded: exponent p must be >= 1");
        if (euclidean_norm(ybar) <= 0.0) throw ConfigError("poly_bounded: ||ybar|| must be > 0");
    }
    if (declared_sup && *declared_sup < 0.0) throw ConfigError("declared_sup must be >= 0");
}

InitialDatum InitialDatum::threshold(double H) {
    InitialDatum u;
    u.kind = DatumKind::threshold;
    u.H = H;
    return u;
}

InitialDatum InitialDatum::trig(std::vector<double> h) {
    InitialDatum u;
    u.kind = DatumKind::trig;
    u.h = std::move(h);
    return u;
}

void eval_B(const Nonlinearity& nl, std::span<const double> x, std::span<double> out) {
    if (out.size() != x.size()) throw ConfigError("eval_B: output dimension mismatch");
    const std::size_t d = x.size();
    switch (nl.kind) {
    case NonlinearityKind::zero:
        for (std::size_t i = 0; i < d; ++i) out[i] = 0.0;
        return;
    case NonlinearityKind::constant:
        check_dim(x, nl.b.size(), "constant nonlinearity");
        for (std::size_t i = 0; i < d; ++i) out[i] = nl.b[i];
        return;
    case NonlinearityKind::sine:
        for (std::size_t i = 0; i < d; ++i) out[i] = std::sin(x[i]);
        return;
    case NonlinearityKind::sine_skew: {
        // (B_m x)_i = sum_{j>i} x_j - sum_{j<i} x_j = S - 2 P_i + x_i,
        // with P_i the inclusive prefix sum.
        double total = 0.0;
        for (double v : x) total += v;
        double prefix = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            prefix += x[i];
            out[i] = std::sin(x[i]) * (total - 2.0 * prefix + x[i]);
        }
        return;
    }
    case NonlinearityKind::poly_bounded: {
        check_dim(x, nl.ybar.size(), "poly_bounded nonlinearity");
        const double ny = euclidean_norm(nl.ybar);
        double nd2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = nl.ybar[i] - x[i];
            nd2 += diff * diff;
        }
        const double denom = ny + std::pow(std::sqrt(nd2), nl.p);
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = nl.ybar[i] - x[i];
            out[i] = ny * diff * std::pow(std::abs(diff), nl.p - 1.0) / denom;
        }
        return;
    }
    }
    throw ConfigError("eval_B: unknown nonlinearity kind");
}

std::vector<double> eval_B(const Nonlinearity& nl, std::span<const double> x) {
    std::vector<double> out(x.size());
    eval_B(nl, x, out);
    return out;
}

double eval_u0(const InitialDatum& u0, std::span<const double> x) {
    switch (u0.kind) {
    case DatumKind::threshold:
        return euclidean_norm(x) >= u0.H ? 1.0 : 0.0;
    case DatumKind::trig: {
        check_dim(x, u0.h.size(), "trig datum");
        double dot = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += u0.h[i] * x[i];
        return std::cos(dot);
    }
    }
    throw ConfigError("eval_u0: unknown datum kind");
}

std::optional<double> sup_norm_B(const Nonlinearity& nl, std::size_t d) {
    switch (nl.kind) {
    case NonlinearityKind::zero:
        return 0.0;
    case NonlinearityKind::constant:
        return euclidean_norm(nl.b);
    case NonlinearityKind::sine:
        return std::sqrt(static_cast<double>(d));
    case NonlinearityKind::sine_skew:
        return std::nullopt; // unbounded
    case NonlinearityKind::poly_bounded:
        // ||B(x)|| <= ||ybar|| ||y-x||_2p^p / (||ybar|| + ||y-x||^p) <= ||ybar||
        return euclidean_norm(nl.ybar);
    }
    return std::nullopt;
}

std::string to_string(NonlinearityKind k) {
    switch (k) {
    case NonlinearityKind::zero: return "zero";
    case NonlinearityKind::constant: return "constant";
    case NonlinearityKind::sine: return "sine";
    case NonlinearityKind::sine_skew: return "sine_skew";
    case NonlinearityKind::poly_bounded: return "poly_bounded";
    }
    return "?";
}

std::string to_string(DatumKind k) {
    return k == DatumKind::threshold ? "threshold" : "trig";
}

} // namespace kgsolve
