#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "kgsolve/model.hpp"

namespace kgsolve {

enum class SimulationMode : std::uint8_t { euler = 0, exact = 1 };

std::string to_string(SimulationMode m);

struct BankMeta {
    std::uint32_t version = 1;
    std::uint32_t d = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t n_coarse = 0; // stored nodes = n_coarse + 1, including t = 0
    double horizon_T = 0.0;
    double fine_dt = 0.0;
    double coarse_dt = 0.0;
    std::uint64_t seed = 0;
    SimulationMode mode = SimulationMode::euler;
    std::vector<double> spectrum;
};

/// Persisted ensemble of sigma-free OU paths Z_k(t_j), simulated at fine_dt
/// and stored at the coarse nodes only. Immutable once built; the same bank
/// serves every sigma, x, u0 and B.
class GaussianBank {
public:
    GaussianBank(BankMeta meta, std::vector<double> values);

    const BankMeta& meta() const { return meta_; }
    std::size_t n_nodes() const { return static_cast<std::size_t>(meta_.n_coarse) + 1; }
    std::size_t n_samples() const { return static_cast<std::size_t>(meta_.n_samples); }
    std::size_t dim() const { return meta_.d; }

    /// Z(t_j) for one sample: d contiguous component values.
    std::span<const double> node(std::size_t sample, std::size_t j) const;
    double value(std::size_t sample, std::size_t j, std::size_t k) const;

    /// Payload in file order: sample-major, then node, then component.
    std::span<const double> values() const { return values_; }

    GridSpec grid() const;

private:
    BankMeta meta_;
    std::vector<double> values_;
};

/// Simulate n_samples independent paths of dZ_k = -a_k Z_k dt + dW_k at
/// fine_dt, recording the coarse nodes. mode = exact uses the exact Gaussian
/// transition instead of the Euler step and is unconditionally stable.
/// Identical seeds give bit-identical banks; each sample draws from its own
/// stream, so the ensemble is independent of generation order.
GaussianBank simulate_bank(const ModelSpec& model, const GridSpec& grid,
                           std::size_t n_samples, std::uint64_t seed,
                           SimulationMode mode = SimulationMode::euler);

/// Bank file: little-endian, magic "KGBANK01", header
/// (u32 version, u32 d, u64 n_samples, u64 n_coarse, f64 horizon_T,
///  f64 fine_dt, f64 coarse_dt, u64 seed, u8 mode, f64[d] spectrum,
///  u64 payload checksum), then the f64 payload in sample-major order.
void save_bank(const GaussianBank& bank, const std::filesystem::path& path);
GaussianBank load_bank(const std::filesystem::path& path);

/// FNV-1a over the payload bytes, as stored in the file header.
std::uint64_t bank_payload_checksum(const GaussianBank& bank);

/// Z_t^x = e^{t_j A} x + sigma Z(t_j) for one sample and node.
void lift_path(const GaussianBank& bank, std::size_t sample, std::span<const double> x,
               double sigma, std::size_t node_j, std::span<double> out);
std::vector<double> lift_path(const GaussianBank& bank, std::size_t sample,
                              std::span<const double> x, double sigma, std::size_t node_j);

} // namespace kgsolve
