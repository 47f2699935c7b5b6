// Command-line front end: bank generation, series solves, reference Monte
// Carlo, parameter sweeps against a shared bank, and the built-in identity
// checks. Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgsolve/config.hpp"
#include "kgsolve/errors.hpp"
#include "kgsolve/gaussian.hpp"
#include "kgsolve/iteration.hpp"
#include "kgsolve/output.hpp"
#include "kgsolve/reference.hpp"
#include "kgsolve/sweep.hpp"

namespace {

using namespace kgsolve;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
    std::string config_file;
    std::vector<std::string> sets; // raw key=value overrides
    std::string seed, bank, out, sigma, samples;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_file, "flat key = value config file");
    cmd->add_option("--set", args.sets, "override a config key, KEY=VALUE")->type_name("KEY=VALUE");
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_option("--bank", args.bank, "bank file path");
    cmd->add_option("--out", args.out, "output base path");
    cmd->add_flag("--strict", args.strict, "exit 3 on non-convergence");
}

RunConfig build_config(const CommonArgs& args) {
    RunConfig cfg = args.config_file.empty() ? default_config() : load_config(args.config_file);
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
        apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.seed.empty()) apply_key(cfg, "seed", args.seed);
    if (!args.bank.empty()) apply_key(cfg, "bank", args.bank);
    if (!args.out.empty()) apply_key(cfg, "out", args.out);
    if (!args.sigma.empty()) apply_key(cfg, "sigma", args.sigma);
    if (!args.samples.empty()) apply_key(cfg, "n_samples", args.samples);
    cfg.strict = args.strict;
    cfg.validate();
    return cfg;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// The bank must have been generated for the same problem; sigma is the one
// parameter that may legitimately differ.
void check_bank_matches(const GaussianBank& bank, const RunConfig& cfg) {
    const BankMeta& m = bank.meta();
    auto fail = [](const std::string& field) {
        throw ConfigError("bank does not match the config: field '" + field + "' differs");
    };
    if (m.d != cfg.model.d) fail("d");
    if (m.horizon_T != cfg.model.horizon_T) fail("horizon_T");
    if (m.fine_dt != cfg.grid.fine_dt) fail("fine_dt");
    if (m.coarse_dt != cfg.grid.coarse_dt) fail("coarse_dt");
    if (m.n_coarse != cfg.grid.n_coarse) fail("n_coarse");
    for (std::size_t k = 0; k < cfg.model.d; ++k) {
        if (m.spectrum[k] != cfg.model.spectrum[k]) fail("spectrum");
    }
}

int cmd_gen_bank(const CommonArgs& args) {
    RunConfig cfg = build_config(args);
    const auto t0 = Clock::now();
    GaussianBank bank = simulate_bank(cfg.model, cfg.grid, cfg.n_samples, cfg.seed, cfg.mode);
    save_bank(bank, cfg.bank_path);
    std::printf("bank: %s\n", cfg.bank_path.string().c_str());
    std::printf("  d=%u n_samples=%llu n_coarse=%llu T=%s fine_dt=%s coarse_dt=%s\n",
                bank.meta().d, static_cast<unsigned long long>(bank.meta().n_samples),
                static_cast<unsigned long long>(bank.meta().n_coarse),
                format_g17(bank.meta().horizon_T).c_str(), format_g17(bank.meta().fine_dt).c_str(),
                format_g17(bank.meta().coarse_dt).c_str());
    std::printf("  seed=%llu mode=%s checksum=%016llx\n",
                static_cast<unsigned long long>(bank.meta().seed),
                to_string(bank.meta().mode).c_str(),
                static_cast<unsigned long long>(bank_payload_checksum(bank)));
    std::printf("  wall_seconds=%.3f\n", seconds_since(t0));
    return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
    RunConfig cfg = build_config(args);
    GaussianBank bank = load_bank(cfg.bank_path);
    check_bank_matches(bank, cfg);

    SeriesEngine engine(bank, cfg.model);
    SeriesResult result = engine.solve_series(cfg.tol, cfg.max_iters, cfg.metric);

    const auto base = cfg.out_path.string();
    write_solve_csv(base + ".csv", result, cfg.grid);
    write_solve_summary_json(base + ".summary.json", cfg, result, cfg.grid);
    write_solve_timings_json(base + ".timings.json", 0.0, result);

    std::printf("solve: n_final=%d converged=%s u(T)=%s stderr=%s\n", result.n_final,
                result.converged ? "true" : "false", format_g17(result.u_final.back().mean).c_str(),
                format_g17(result.u_final.back().std_error).c_str());
    if (!result.converged && cfg.strict) {
        std::fprintf(stderr, "solve: no convergence within max_iters=%d (strict)\n", cfg.max_iters);
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_reference(const CommonArgs& args) {
    RunConfig cfg = build_config(args);
    ReferenceRun run = mc_reference(cfg.model, cfg.grid, cfg.n_samples, cfg.seed);

    const auto base = cfg.out_path.string();
    write_reference_csv(base + ".csv", run, cfg.grid);
    nlohmann::json timings;
    timings["reference_seconds"] = run.wall_seconds;
    atomic_write_text(base + ".timings.json", timings.dump(2) + "\n");

    std::printf("reference: u(T)=%s stderr=%s\n", format_g17(run.u.back().mean).c_str(),
                format_g17(run.u.back().std_error).c_str());
    return kExitOk;
}

int cmd_sweep_sigma(const CommonArgs& args) {
    RunConfig cfg = build_config(args);
    if (cfg.sigma_sweep.empty()) {
        throw ConfigError("sweep-sigma: set sigma_sweep to a comma list of sigma values");
    }
    // decreasing sigma, the order the cumulative curves are defined in
    std::vector<double> sigmas = cfg.sigma_sweep;
    std::sort(sigmas.begin(), sigmas.end(), std::greater<>());

    SigmaSweepResult result;
    if (std::filesystem::exists(cfg.bank_path)) {
        const auto t0 = Clock::now();
        GaussianBank bank = load_bank(cfg.bank_path);
        result.timings.bank_seconds = seconds_since(t0);
        check_bank_matches(bank, cfg);
        SweepOptions opts{cfg.tol, cfg.max_iters, cfg.sweep_reference, cfg.seed, cfg.degrade_tol};
        auto sweep = sweep_sigma(bank, cfg.model, sigmas, opts);
        result.points = std::move(sweep.points);
        result.timings.solve_seconds = std::move(sweep.timings.solve_seconds);
        result.timings.reference_seconds = std::move(sweep.timings.reference_seconds);
    } else {
        const auto t0 = Clock::now();
        GaussianBank bank = simulate_bank(cfg.model, cfg.grid, cfg.n_samples, cfg.seed, cfg.mode);
        save_bank(bank, cfg.bank_path);
        result.timings.bank_seconds = seconds_since(t0);
        SweepOptions opts{cfg.tol, cfg.max_iters, cfg.sweep_reference, cfg.seed, cfg.degrade_tol};
        auto sweep = sweep_sigma(bank, cfg.model, sigmas, opts);
        result.points = std::move(sweep.points);
        result.timings.solve_seconds = std::move(sweep.timings.solve_seconds);
        result.timings.reference_seconds = std::move(sweep.timings.reference_seconds);
    }

    const auto base = cfg.out_path.string();
    write_sigma_sweep_csv(base + ".csv", result);
    write_sigma_sweep_timings_json(base + ".timings.json", result);

    bool all_converged = true;
    for (const auto& p : result.points) {
        std::printf("sigma=%s: u(T)=%s n_final=%d converged=%s%s\n", format_g17(p.sigma).c_str(),
                    format_g17(p.u_T.mean).c_str(), p.n_final, p.converged ? "true" : "false",
                    p.degraded ? " DEGRADED" : "");
        all_converged = all_converged && p.converged;
    }
    if (!all_converged && cfg.strict) return kExitNumeric;
    return kExitOk;
}

int cmd_sweep_x(const CommonArgs& args) {
    RunConfig cfg = build_config(args);
    std::vector<double> epsilons =
        cfg.x_perturbations.empty() ? std::vector<double>{1.0} : cfg.x_perturbations;

    GaussianBank bank = load_bank(cfg.bank_path);
    check_bank_matches(bank, cfg);
    SweepOptions opts{cfg.tol, cfg.max_iters, false, cfg.seed, cfg.degrade_tol};
    XSweepResult result = sweep_x(bank, cfg.model, epsilons, opts);

    write_x_sweep_csv(cfg.out_path.string() + ".csv", result);
    std::printf("sweep-x: u(T,x)=%s, %zu perturbation rows\n",
                format_g17(result.u_base.mean).c_str(), result.rows.size());
    return kExitOk;
}

bool report(const char* name, bool ok) {
    std::printf("  [%s] %s\n", ok ? "ok" : "FAIL", name);
    return ok;
}

// Built-in identity and oracle checks, fast enough to run on every install.
int cmd_validate() {
    bool ok = true;

    {
        bool pass = true;
        for (int n : {1, 2, 3}) {
            for (double delta : {0.3, 0.5, 0.7}) {
                for (double t : {0.5, 1.0}) {
                    const auto bi = check_beta_identity(n, delta, t);
                    pass = pass && std::abs(bi.numeric - bi.closed_form) <=
                                       1e-3 * std::abs(bi.closed_form);
                }
            }
        }
        ok = report("beta/gamma identity (nested quadrature vs log-gamma)", pass) && ok;
    }

    ModelSpec model = default_config().model;
    {
        bool pass = true;
        std::uint64_t rs = 7;
        for (int i = 0; i < 1000; ++i) {
            const double t = 1e-4 + 2.0 * static_cast<double>(splitmix64(rs) >> 11) * 0x1.0p-53;
            const std::size_t k = 1 + splitmix64(rs) % model.d;
            const double xi = xi_diag(t, k, model);
            const double via = model.sigma * qt_inv_sqrt_diag(t, k, model) * lambda_diag(t, k, model);
            pass = pass && std::abs(xi - via) <= 1e-12 * std::abs(xi);
        }
        ok = report("Xi = sigma Q^{-1/2} Lambda on 1000 random (t,k)", pass) && ok;
    }
    {
        bool pass = true;
        double prev_q = 0.0, prev_l = 1e300;
        for (int i = 1; i <= 100; ++i) {
            const double t = i * 0.01;
            const double q = qt_diag(t, 1, model), l = lambda_diag(t, 1, model);
            pass = pass && q > prev_q && l < prev_l;
            prev_q = q;
            prev_l = l;
        }
        ok = report("Q_t increasing, Lambda decreasing on a 100-point grid", pass) && ok;
    }
    {
        bool pass = true;
        for (double t = 1e-6; t <= 1e-3; t *= 1.7) {
            const double v = std::sqrt(t) * lambda_diag(t, 1, model);
            pass = pass && std::abs(v - 1.0 / model.sigma) <= 1e-2;
        }
        ok = report("sqrt(t) Lambda -> 1/sigma as t -> 0 (delta = 1/2 rate)", pass) && ok;
    }
    {
        BoundParams bp{0.5, 1.0, 1.0, 1.0};
        bool pass = true;
        double first_ratio = 0.0, prev_ratio = 1e300;
        for (int n = 1; n <= 200; ++n) {
            const double ratio = gamma_bound(n + 1, 1.0, bp) / gamma_bound(n, 1.0, bp);
            if (n == 1) first_ratio = ratio;
            pass = pass && ratio < prev_ratio;
            prev_ratio = ratio;
        }
        // the ratio decays like n^{-(1-delta)}: slow, but down to 0
        pass = pass && prev_ratio < 0.2 * first_ratio;
        ok = report("gamma bound ratio test (series converges)", pass) && ok;
    }
    {
        // small end-to-end: v0 for a trig datum vs the Gaussian closed form
        ModelSpec m = model;
        m.d = 3;
        m.spectrum = default_spectrum(3);
        m.x0.assign(3, 1.0);
        m.nonlinearity = Nonlinearity::zero();
        m.initial_datum = InitialDatum::trig({0.5, 0.5, 0.5});
        const GridSpec grid = GridSpec::make(1.0, 0.01, 0.01);
        const GaussianBank bank = simulate_bank(m, grid, 4000, 99, SimulationMode::exact);
        const auto v0 = v0_estimate(bank, m);
        ModelSpec cf = m;
        cf.nonlinearity = Nonlinearity::constant(std::vector<double>(3, 0.0));
        bool pass = true;
        for (std::size_t j = 1; j < v0.size(); ++j) {
            const double want = closed_form_constant_drift(cf, grid.node_time(j), m.x0);
            pass = pass && std::abs(v0[j].mean - want) <= 4.0 * v0[j].std_error + 1e-12;
        }
        ok = report("v0 matches the Gaussian characteristic-function oracle", pass) && ok;
    }

    std::printf("validate: %s\n", ok ? "all checks passed" : "CHECKS FAILED");
    return ok ? kExitOk : kExitNumeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kolmogorov equation solver via the Gaussian iteration series"};
    app.require_subcommand(1);

    CommonArgs gen_args, solve_args, ref_args, ssig_args, sx_args;

    auto* gen = app.add_subcommand("gen-bank", "simulate and persist the Gaussian path bank");
    add_common(gen, gen_args);
    gen->add_option("--samples", gen_args.samples, "number of paths");

    auto* solve = app.add_subcommand("solve", "run the iteration series against a bank");
    add_common(solve, solve_args);
    solve->add_option("--sigma", solve_args.sigma, "noise strength (bank stays sigma-free)");

    auto* ref = app.add_subcommand("reference", "direct Euler-Maruyama Monte Carlo");
    add_common(ref, ref_args);

    auto* ssig = app.add_subcommand("sweep-sigma", "solve for each sigma against one bank");
    add_common(ssig, ssig_args);

    auto* sx = app.add_subcommand("sweep-x", "u(T, x +- eps e_k) - u(T, x) table");
    add_common(sx, sx_args);

    app.add_subcommand("validate", "run the built-in identity and oracle checks");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen_bank(gen_args);
        if (solve->parsed()) return cmd_solve(solve_args);
        if (ref->parsed()) return cmd_reference(ref_args);
        if (ssig->parsed()) return cmd_sweep_sigma(ssig_args);
        if (sx->parsed()) return cmd_sweep_x(sx_args);
        return cmd_validate();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitConfig;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
