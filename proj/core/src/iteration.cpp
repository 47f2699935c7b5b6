#include "kgsolve/iteration.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "kgsolve/errors.hpp"
#include "kgsolve/gaussian.hpp"
#include "kgsolve/model_zoo.hpp"
#include "kgsolve/quadrature.hpp"
#include "kgsolve/rng.hpp"

namespace kgsolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

std::string to_string(StoppingMetric m) {
    return m == StoppingMetric::sup_t ? "sup_t" : "endpoint";
}

SeriesEngine::SeriesEngine(const GaussianBank& bank, const ModelSpec& model)
    : bank_(bank), model_(model), grid_(bank.grid()) {
    model_.validate();
    const BankMeta& bm = bank.meta();
    if (bm.d != model_.d) {
        throw ConfigError("bank/model mismatch: d (bank " + std::to_string(bm.d) +
                          ", model " + std::to_string(model_.d) + ")");
    }
    if (bm.horizon_T != model_.horizon_T) {
        throw ConfigError("bank/model mismatch: horizon_T");
    }
    for (std::size_t k = 0; k < model_.d; ++k) {
        if (bm.spectrum[k] != model_.spectrum[k]) {
            throw ConfigError("bank/model mismatch: spectrum at k = " + std::to_string(k + 1));
        }
    }
    if (bank.n_samples() == 0) throw std::invalid_argument("series engine: empty bank");

    const std::size_t d = model_.d;
    const std::size_t n_nodes = grid_.n_nodes();
    const double dt = grid_.coarse_dt;
    const double sigma = model_.sigma;

    // Gap tables: the kernel weight Lambda(tau) Q_tau^{-1/2} and the decay
    // e^{-tau a_k} depend only on tau = gap * dt.
    weight_.resize(grid_.n_coarse * d);
    decay_.resize(grid_.n_coarse * d);
    for (std::size_t gap = 1; gap <= grid_.n_coarse; ++gap) {
        const double tau = static_cast<double>(gap) * dt;
        for (std::size_t k = 0; k < d; ++k) {
            const double a = model_.spectrum[k];
            const double e = std::exp(-tau * a);
            weight_[(gap - 1) * d + k] = 2.0 * a * e / (sigma * sigma * (-std::expm1(-2.0 * tau * a)));
            decay_[(gap - 1) * d + k] = e;
        }
    }

    mean_.resize(n_nodes * d);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const double t = grid_.node_time(j);
        for (std::size_t k = 0; k < d; ++k) {
            mean_[j * d + k] = std::exp(-t * model_.spectrum[k]) * model_.x0[k];
        }
    }

    u0_cache_.resize(bank.n_samples() * n_nodes);
    std::vector<double> lifted(d);
    for (std::size_t s = 0; s < bank.n_samples(); ++s) {
        for (std::size_t j = 0; j < n_nodes; ++j) {
            lift_node(s, j, lifted);
            u0_cache_[s * n_nodes + j] = eval_u0(model_.initial_datum, lifted);
        }
    }
}

void SeriesEngine::lift_node(std::size_t sample, std::size_t j, std::span<double> out) const {
    const auto z = bank_.node(sample, j);
    const double* m = mean_.data() + j * model_.d;
    for (std::size_t k = 0; k < model_.d; ++k) {
        out[k] = m[k] + model_.sigma * z[k];
    }
}

IterationState SeriesEngine::initial_state() const {
    IterationState st;
    st.n = 0;
    st.n_samples = bank_.n_samples();
    st.n_nodes = grid_.n_nodes();
    st.values.assign(st.n_samples * st.n_nodes, 1.0); // I^0 == 1
    return st;
}

double SeriesEngine::kernel_g(std::size_t sample, std::size_t i, std::size_t j) const {
    if (i >= j) {
        throw std::invalid_argument("kernel_g: needs i < j (the kernel diverges at tau = 0)");
    }
    const std::size_t d = model_.d;
    std::vector<double> zi(d), zj(d), b(d);
    lift_node(sample, i, zi);
    lift_node(sample, j, zj);
    eval_B(model_.nonlinearity, zi, b);
    const std::size_t gap = j - i;
    const double* w = weight_.data() + (gap - 1) * d;
    const double* e = decay_.data() + (gap - 1) * d;
    double g = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        g += w[k] * b[k] * (zj[k] - e[k] * zi[k]);
    }
    return g;
}

IterationState SeriesEngine::advance_iteration(const IterationState& state) const {
    const std::size_t n_samples = bank_.n_samples();
    const std::size_t n_nodes = grid_.n_nodes();
    const std::size_t d = model_.d;
    if (state.n_samples != n_samples || state.n_nodes != n_nodes ||
        state.values.size() != n_samples * n_nodes) {
        throw std::invalid_argument("advance_iteration: state shape disagrees with bank");
    }

    IterationState next;
    next.n = state.n + 1;
    next.n_samples = n_samples;
    next.n_nodes = n_nodes;
    next.values.assign(n_samples * n_nodes, 0.0); // I^{n+1}(0) = 0

    const double sigma_dt = model_.sigma * grid_.coarse_dt;
    std::vector<double> bcache(n_nodes * d);
    std::vector<double> lifted(d);

    for (std::size_t s = 0; s < n_samples; ++s) {
        // B(Z_{t_i}^x) for every node of this sample, reused across all j.
        for (std::size_t i = 0; i < n_nodes; ++i) {
            lift_node(s, i, lifted);
            eval_B(model_.nonlinearity, lifted, std::span<double>(bcache.data() + i * d, d));
        }
        const double* zb = bank_.node(s, 0).data(); // sample block, node-major
        const double* in = state.values.data() + s * n_nodes;
        double* out = next.values.data() + s * n_nodes;
        for (std::size_t j = 1; j < n_nodes; ++j) {
            const double* zj = zb + j * d;
            double acc = 0.0;
            for (std::size_t i = 0; i < j; ++i) {
                const std::size_t gap = j - i;
                const double* w = weight_.data() + (gap - 1) * d;
                const double* e = decay_.data() + (gap - 1) * d;
                const double* bi = bcache.data() + i * d;
                const double* zi = zb + i * d;
                double g = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    // sigma-free increment: the e^{tA} x parts of Z^x cancel
                    // exactly in Z_t^x - e^{tau A} Z_s^x, leaving sigma (Z_t - e Z_s)
                    g += w[k] * bi[k] * (zj[k] - e[k] * zi[k]);
                }
                acc += g * in[i];
            }
            out[j] = acc * sigma_dt; // left-endpoint rule
        }
    }
    return next;
}

std::vector<Estimate> SeriesEngine::vn_estimate(const IterationState& state) const {
    const std::size_t n_nodes = grid_.n_nodes();
    std::vector<Estimate> est(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) est[j] = vn_estimate_at(state, j);
    return est;
}

Estimate SeriesEngine::vn_estimate_at(const IterationState& state, std::size_t node) const {
    const std::size_t n_samples = bank_.n_samples();
    const std::size_t n_nodes = grid_.n_nodes();
    if (node >= n_nodes) throw std::out_of_range("vn_estimate_at: node out of range");
    std::vector<double> products(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        products[s] = u0_cache_[s * n_nodes + node] * state.values[s * n_nodes + node];
    }
    return estimate_from_samples(products);
}

std::vector<Estimate> SeriesEngine::v0_estimate() const {
    return vn_estimate(initial_state());
}

SeriesResult SeriesEngine::solve_series(double tol, int max_iters, StoppingMetric metric) const {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_series: tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("solve_series: max_iters must be >= 1");

    const auto t_start = Clock::now();
    const std::size_t n_nodes = grid_.n_nodes();
    const std::size_t n_samples = bank_.n_samples();

    SeriesResult res;
    res.metric = metric;

    IterationState state = initial_state();
    std::vector<double> sum_I = state.values; // per-sample running sum of I^n

    auto check_nan = [&](const std::vector<Estimate>& v, int n) {
        for (const Estimate& e : v) {
            if (std::isnan(e.mean)) {
                throw NumericError("solve_series: NaN in v^" + std::to_string(n));
            }
        }
    };

    auto push_term = [&](const std::vector<Estimate>& v) {
        std::vector<double> u(n_nodes);
        for (std::size_t j = 0; j < n_nodes; ++j) {
            const double prev = res.u_partial.empty() ? 0.0 : res.u_partial.back()[j];
            u[j] = prev + v[j].mean;
        }
        res.v_terms.push_back(v);
        res.u_partial.push_back(std::move(u));
    };

    {
        auto v0 = vn_estimate(state);
        check_nan(v0, 0);
        push_term(v0);
    }

    for (int n = 1; n <= max_iters; ++n) {
        const auto t_iter = Clock::now();
        state = advance_iteration(state);
        for (std::size_t i = 0; i < sum_I.size(); ++i) sum_I[i] += state.values[i];
        auto vn = vn_estimate(state);
        res.timings.iteration_seconds.push_back(seconds_since(t_iter));
        check_nan(vn, n);
        push_term(vn);

        double err = 0.0;
        if (metric == StoppingMetric::sup_t) {
            for (const Estimate& e : vn) err = std::max(err, std::abs(e.mean));
        } else {
            err = std::abs(vn.back().mean);
        }
        res.err_history.push_back(err);
        res.n_final = n;
        if (err < tol) {
            res.converged = true;
            break;
        }
    }

    // Honest stderr of the partial sum: per-sample u0 * (I^0 + ... + I^n).
    res.u_final.resize(n_nodes);
    std::vector<double> products(n_samples);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        for (std::size_t s = 0; s < n_samples; ++s) {
            products[s] = u0_cache_[s * n_nodes + j] * sum_I[s * n_nodes + j];
        }
        res.u_final[j] = estimate_from_samples(products);
    }

    res.timings.total_seconds = seconds_since(t_start);
    return res;
}

std::vector<Estimate> v0_estimate(const GaussianBank& bank, const ModelSpec& model) {
    return SeriesEngine(bank, model).v0_estimate();
}

SeriesResult solve_series(const GaussianBank& bank, const ModelSpec& model,
                          double tol, int max_iters, StoppingMetric metric) {
    return SeriesEngine(bank, model).solve_series(tol, max_iters, metric);
}

double gamma_bound(int n, double t, const BoundParams& bp) {
    bp.validate();
    if (n < 0) throw std::invalid_argument("gamma_bound: n must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("gamma_bound: t must be > 0");
    if (n == 0) return bp.u0_sup;
    if (bp.b_sup == 0.0) return 0.0;
    const double alpha = 1.0 - bp.delta;
    const double nn = static_cast<double>(n);
    const double log_bound = nn * (std::log(bp.b_sup) + std::log(bp.c_delta)) +
                             nn * alpha * std::log(t) + nn * std::lgamma(alpha) -
                             std::lgamma(1.0 + nn * alpha);
    return bp.u0_sup * std::exp(log_bound);
}

BetaIdentity check_beta_identity(int n, double delta, double t) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("check_beta_identity: delta must lie in (0,1)");
    }
    if (n < 0) throw std::invalid_argument("check_beta_identity: n must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("check_beta_identity: t must be > 0");

    const double alpha = 1.0 - delta;
    BetaIdentity out;
    out.closed_form = std::exp(static_cast<double>(n) * std::lgamma(alpha) -
                               std::lgamma(1.0 + n * alpha)) *
                      std::pow(t, n * alpha);

    // H_m(r) = int_0^r (r-s)^{-delta} H_{m-1}(s) ds, H_0 == 1; the answer is
    // H_n(t). The substitution s = r (1 - v^{1/(1-delta)}) absorbs the
    // endpoint singularity exactly, so plain Gauss-Legendre converges fast.
    const GaussLegendre gl = gauss_legendre(96);
    std::function<double(int, double)> H = [&](int m, double r) -> double {
        if (m == 0) return 1.0;
        double acc = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double s = r * (1.0 - std::pow(gl.nodes[q], 1.0 / alpha));
            acc += gl.weights[q] * H(m - 1, s);
        }
        return std::pow(r, alpha) / alpha * acc;
    };
    out.numeric = H(n, t);
    return out;
}

DerivativeCheck derivative_formula_check(const ModelSpec& model, double t,
                                         std::span<const double> h,
                                         std::size_t n_samples, std::uint64_t seed) {
    model.validate();
    if (!(t > 0.0)) throw std::domain_error("derivative check: t must be > 0");
    if (h.size() != model.d) throw std::invalid_argument("derivative check: h length != d");
    if (n_samples == 0) throw std::invalid_argument("derivative check: n_samples must be > 0");

    const std::size_t d = model.d;
    const double eps = 1e-3;
    const double sigma = model.sigma;

    std::vector<double> decay(d), sd(d), lamq(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double a = model.spectrum[k];
        decay[k] = std::exp(-t * a);
        sd[k] = std::sqrt(-std::expm1(-2.0 * a * t) / (2.0 * a)); // sigma-free
        lamq[k] = ou_lambda(t, a, sigma) * ou_inv_sqrt_variance(t, a, sigma);
    }

    std::vector<double> mcs(n_samples), fds(n_samples), diffs(n_samples);
    std::vector<double> z(d), base(d), plus(d), minus(d);
    for (std::size_t s = 0; s < n_samples; ++s) {
        NormalSampler normal(stream_seed(seed, kOracleStream, s));
        double pairing = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            z[k] = sd[k] * normal();
            base[k] = decay[k] * model.x0[k] + sigma * z[k];
            plus[k] = decay[k] * (model.x0[k] + eps * h[k]) + sigma * z[k];
            minus[k] = decay[k] * (model.x0[k] - eps * h[k]) + sigma * z[k];
            pairing += lamq[k] * h[k] * sigma * z[k];
        }
        mcs[s] = eval_u0(model.initial_datum, base) * pairing;
        fds[s] = (eval_u0(model.initial_datum, plus) - eval_u0(model.initial_datum, minus)) /
                 (2.0 * eps);
        diffs[s] = mcs[s] - fds[s];
    }

    DerivativeCheck out;
    out.mc = estimate_from_samples(mcs);
    out.fd = estimate_from_samples(fds);
    out.diff = estimate_from_samples(diffs);
    return out;
}

} // namespace kgsolve
