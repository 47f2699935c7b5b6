#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kgsolve/bank.hpp"
#include "kgsolve/iteration.hpp"
#include "kgsolve/model.hpp"

namespace kgsolve {

/// Everything one run needs, assembled from the defaults, an optional
/// flat key-value config file, and command-line overrides (in that order).
struct RunConfig {
    ModelSpec model;
    GridSpec grid;
    std::size_t n_samples = 100000;
    double tol = 1e-3;
    int max_iters = 100;
    std::uint64_t seed = 42;
    StoppingMetric metric = StoppingMetric::sup_t;
    SimulationMode mode = SimulationMode::euler;
    std::filesystem::path bank_path = "bank.kgb";
    std::filesystem::path out_path = "run";
    std::vector<double> sigma_sweep;      // sweep-sigma values
    std::vector<double> x_perturbations;  // sweep-x epsilon magnitudes
    bool sweep_reference = true;          // run the reference per sweep point
    double degrade_tol = 0.05;            // |u_iter - u_ref| flag threshold
    bool strict = false;

    void validate() const;
};

/// Defaults: d = 10, a_k = k^2, sigma = 1, T = 1, sine drift, threshold
/// datum with H = 1, x = e, fine_dt = 1e-4, coarse_dt = 1e-2, N_s = 1e5,
/// tol = 1e-3.
RunConfig default_config();

/// Parse a flat `key = value` config file. `#` and `;` start comments.
/// Unknown or duplicate keys are ConfigErrors.
RunConfig load_config(const std::filesystem::path& path);

/// Apply one key=value pair on top of an existing config. Vector-valued keys
/// (x0, ybar, trig_h, b_const, spectrum, sigma_sweep, x_perturbations) accept
/// either a comma list or a single scalar broadcast to length d.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// The config as the flat key-value map it round-trips through (used for the
/// summary echo and reproducibility).
std::map<std::string, std::string> config_echo(const RunConfig& cfg);

} // namespace kgsolve
