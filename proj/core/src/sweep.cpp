#include "kgsolve/sweep.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "kgsolve/output.hpp"
#include "kgsolve/reference.hpp"

namespace kgsolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> cumulative(const std::vector<double>& v, double offset = 0.0) {
    std::vector<double> out(v.size());
    double acc = offset;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        out[i] = acc;
    }
    return out;
}

} // namespace

std::vector<double> TimingLedger::cumulative_iteration() const {
    return cumulative(solve_seconds);
}

std::vector<double> TimingLedger::cumulative_iteration_with_bank() const {
    return cumulative(solve_seconds, bank_seconds);
}

std::vector<double> TimingLedger::cumulative_reference() const {
    return cumulative(reference_seconds);
}

SigmaSweepResult sweep_sigma(const GaussianBank& bank, const ModelSpec& base,
                             std::span<const double> sigmas, const SweepOptions& opts) {
    SigmaSweepResult result;
    for (double sigma : sigmas) {
        ModelSpec model = base;
        model.sigma = sigma;

        SigmaSweepPoint point;
        point.sigma = sigma;

        const auto t_solve = Clock::now();
        SeriesEngine engine(bank, model);
        const SeriesResult series =
            engine.solve_series(opts.tol, opts.max_iters, StoppingMetric::endpoint);
        result.timings.solve_seconds.push_back(seconds_since(t_solve));

        point.u_T = series.u_final.back();
        point.n_final = series.n_final;
        point.converged = series.converged;

        if (opts.with_reference) {
            const auto t_ref = Clock::now();
            const ReferenceRun ref =
                mc_reference(model, bank.grid(), bank.n_samples(), opts.reference_seed);
            result.timings.reference_seconds.push_back(seconds_since(t_ref));
            point.u_ref_T = ref.u.back();
            point.degraded = std::abs(point.u_T.mean - point.u_ref_T->mean) > opts.degrade_tol;
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

XSweepResult sweep_x(const GaussianBank& bank, const ModelSpec& base,
                     std::span<const double> epsilons, const SweepOptions& opts) {
    XSweepResult result;
    {
        SeriesEngine engine(bank, base);
        const SeriesResult series =
            engine.solve_series(opts.tol, opts.max_iters, StoppingMetric::endpoint);
        result.u_base = series.u_final.back();
        result.base_n_final = series.n_final;
    }
    for (double eps : epsilons) {
        for (std::size_t k = 1; k <= base.d; ++k) {
            for (int sign : {+1, -1}) {
                ModelSpec model = base;
                model.x0[k - 1] += sign * eps;
                SeriesEngine engine(bank, model);
                const SeriesResult series =
                    engine.solve_series(opts.tol, opts.max_iters, StoppingMetric::endpoint);
                XPerturbationRow row;
                row.epsilon = eps;
                row.k = k;
                row.sign = sign;
                row.u_base = result.u_base.mean;
                row.u_pert = series.u_final.back().mean;
                row.diff = row.u_pert - row.u_base;
                result.rows.push_back(row);
            }
        }
    }
    return result;
}

void write_sigma_sweep_csv(const std::filesystem::path& path, const SigmaSweepResult& result) {
    std::string csv = "sigma,u_iter,stderr_iter,n_final,converged,u_ref,stderr_ref,degraded\n";
    for (const auto& p : result.points) {
        csv += format_g17(p.sigma);
        csv += ',';
        csv += format_g17(p.u_T.mean);
        csv += ',';
        csv += format_g17(p.u_T.std_error);
        csv += ',';
        csv += std::to_string(p.n_final);
        csv += ',';
        csv += p.converged ? "1" : "0";
        csv += ',';
        csv += p.u_ref_T ? format_g17(p.u_ref_T->mean) : "nan";
        csv += ',';
        csv += p.u_ref_T ? format_g17(p.u_ref_T->std_error) : "nan";
        csv += ',';
        csv += p.degraded ? "1" : "0";
        csv += '\n';
    }
    atomic_write_text(path, csv);
}

void write_sigma_sweep_timings_json(const std::filesystem::path& path,
                                    const SigmaSweepResult& result) {
    nlohmann::json j;
    j["bank_seconds"] = result.timings.bank_seconds;
    j["solve_seconds"] = result.timings.solve_seconds;
    j["reference_seconds"] = result.timings.reference_seconds;
    j["cumulative_iteration"] = result.timings.cumulative_iteration();
    j["cumulative_iteration_with_bank"] = result.timings.cumulative_iteration_with_bank();
    j["cumulative_reference"] = result.timings.cumulative_reference();
    atomic_write_text(path, j.dump(2) + "\n");
}

void write_x_sweep_csv(const std::filesystem::path& path, const XSweepResult& result) {
    std::string csv = "epsilon,k,sign,u_base,u_pert,diff\n";
    for (const auto& r : result.rows) {
        csv += format_g17(r.epsilon);
        csv += ',';
        csv += std::to_string(r.k);
        csv += ',';
        csv += std::to_string(r.sign);
        csv += ',';
        csv += format_g17(r.u_base);
        csv += ',';
        csv += format_g17(r.u_pert);
        csv += ',';
        csv += format_g17(r.diff);
        csv += '\n';
    }
    atomic_write_text(path, csv);
}

} // namespace kgsolve
