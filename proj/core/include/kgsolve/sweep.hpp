#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "kgsolve/bank.hpp"
#include "kgsolve/estimate.hpp"
#include "kgsolve/iteration.hpp"
#include "kgsolve/model.hpp"

namespace kgsolve {

/// Wall-clock per phase, plus the cumulative curves across a sweep.
/// Reference cost repeats in full at every point; the iteration pays the
/// bank once and then only the per-sigma averages.
struct TimingLedger {
    double bank_seconds = 0.0;
    std::vector<double> solve_seconds;
    std::vector<double> reference_seconds;

    std::vector<double> cumulative_iteration() const;
    std::vector<double> cumulative_iteration_with_bank() const;
    std::vector<double> cumulative_reference() const;
};

struct SweepOptions {
    double tol = 1e-3;
    int max_iters = 100;
    bool with_reference = true;
    std::uint64_t reference_seed = 42;
    double degrade_tol = 0.05;
};

struct SigmaSweepPoint {
    double sigma = 0.0;
    Estimate u_T;
    int n_final = 0;
    bool converged = false;
    std::optional<Estimate> u_ref_T;
    bool degraded = false; // |u_iter - u_ref| > degrade_tol at T
};

struct SigmaSweepResult {
    std::vector<SigmaSweepPoint> points;
    TimingLedger timings;
};

/// Solve u(T, x) for each sigma against the one shared bank, in the given
/// order (the CLI passes decreasing sigma), with endpoint stopping.
/// Optionally runs the full reference Monte Carlo per point. Per-point
/// non-convergence is recorded and the sweep continues.
SigmaSweepResult sweep_sigma(const GaussianBank& bank, const ModelSpec& base,
                             std::span<const double> sigmas, const SweepOptions& opts);

struct XPerturbationRow {
    double epsilon = 0.0;
    std::size_t k = 0; // 1-based coordinate
    int sign = +1;
    double u_base = 0.0;
    double u_pert = 0.0;
    double diff = 0.0; // u(T, x + sign * eps * e_k) - u(T, x)
};

struct XSweepResult {
    Estimate u_base;
    int base_n_final = 0;
    std::vector<XPerturbationRow> rows;
};

/// u(T, x +- eps e_k) - u(T, x) for every coordinate and epsilon, re-lifting
/// the same bank paths for each perturbed x (the bank is never re-simulated).
XSweepResult sweep_x(const GaussianBank& bank, const ModelSpec& base,
                     std::span<const double> epsilons, const SweepOptions& opts);

void write_sigma_sweep_csv(const std::filesystem::path& path, const SigmaSweepResult& result);
void write_sigma_sweep_timings_json(const std::filesystem::path& path,
                                    const SigmaSweepResult& result);
void write_x_sweep_csv(const std::filesystem::path& path, const XSweepResult& result);

} // namespace kgsolve
