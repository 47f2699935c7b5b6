#include "kgsolve/bank.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "kgsolve/errors.hpp"
#include "kgsolve/rng.hpp"

namespace kgsolve {

namespace {

constexpr char kMagic[8] = {'K', 'G', 'B', 'A', 'N', 'K', '0', '1'};
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(const unsigned char* data, std::size_t n, std::uint64_t h = kFnvOffset) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= kFnvPrime;
    }
    return h;
}

// Little-endian primitives. On LE hosts the payload block is copied whole.

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32() {
        const unsigned char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        const unsigned char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::size_t remaining() const { return size_ - pos_; }
    const unsigned char* cursor() const { return data_ + pos_; }

private:
    const unsigned char* take(std::size_t n) {
        if (pos_ + n > size_) throw FormatError("bank file: truncated header");
        const unsigned char* p = data_ + pos_;
        pos_ += n;
        return p;
    }

    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

std::uint64_t payload_checksum(std::span<const double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        return fnv1a(reinterpret_cast<const unsigned char*>(values.data()),
                     values.size() * sizeof(double));
    } else {
        std::uint64_t h = kFnvOffset;
        for (double v : values) {
            const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
            unsigned char b[8];
            for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
            h = fnv1a(b, 8, h);
        }
        return h;
    }
}

} // namespace

std::string to_string(SimulationMode m) {
    return m == SimulationMode::euler ? "euler" : "exact";
}

GaussianBank::GaussianBank(BankMeta meta, std::vector<double> values)
    : meta_(std::move(meta)), values_(std::move(values)) {
    const std::size_t expected = static_cast<std::size_t>(meta_.n_samples) *
                                 (static_cast<std::size_t>(meta_.n_coarse) + 1) * meta_.d;
    if (values_.size() != expected) {
        throw FormatError("bank: payload length " + std::to_string(values_.size()) +
                          " disagrees with header (expected " + std::to_string(expected) + ")");
    }
    if (meta_.spectrum.size() != meta_.d) {
        throw FormatError("bank: spectrum length disagrees with header d");
    }
}

std::span<const double> GaussianBank::node(std::size_t sample, std::size_t j) const {
    if (sample >= n_samples()) throw std::out_of_range("bank: sample index out of range");
    if (j >= n_nodes()) throw std::out_of_range("bank: node index out of range");
    const std::size_t offset = (sample * n_nodes() + j) * meta_.d;
    return {values_.data() + offset, meta_.d};
}

double GaussianBank::value(std::size_t sample, std::size_t j, std::size_t k) const {
    return node(sample, j)[k];
}

GridSpec GaussianBank::grid() const {
    GridSpec g;
    g.fine_dt = meta_.fine_dt;
    g.coarse_dt = meta_.coarse_dt;
    g.n_coarse = static_cast<std::size_t>(meta_.n_coarse);
    return g;
}

GaussianBank simulate_bank(const ModelSpec& model, const GridSpec& grid,
                           std::size_t n_samples, std::uint64_t seed, SimulationMode mode) {
    model.validate();
    grid.validate(model.horizon_T);
    if (n_samples == 0) throw ConfigError("bank: n_samples must be > 0");

    const std::size_t d = model.d;
    if (mode == SimulationMode::euler) {
        for (std::size_t k = 0; k < d; ++k) {
            if (model.spectrum[k] * grid.fine_dt >= 2.0) {
                throw ConfigError("bank: Euler step unstable for a_" + std::to_string(k + 1) +
                                  " = " + std::to_string(model.spectrum[k]) +
                                  " at fine_dt = " + std::to_string(grid.fine_dt) +
                                  " (need a_k * fine_dt < 2, or mode = exact)");
            }
        }
    }

    const std::size_t n_nodes = grid.n_nodes();
    const std::size_t per_coarse = grid.steps_per_coarse();
    const double dt = grid.fine_dt;

    // Per-component step coefficients. Euler: Z <- (1 - a dt) Z + sqrt(dt) xi.
    // Exact: Z <- e^{-a dt} Z + sqrt((1 - e^{-2 a dt}) / 2a) xi.
    std::vector<double> decay(d), noise(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double a = model.spectrum[k];
        if (mode == SimulationMode::euler) {
            decay[k] = 1.0 - a * dt;
            noise[k] = std::sqrt(dt);
        } else {
            decay[k] = std::exp(-a * dt);
            noise[k] = std::sqrt(-std::expm1(-2.0 * a * dt) / (2.0 * a));
        }
    }

    std::vector<double> values(n_samples * n_nodes * d);
    std::vector<double> z(d);
    for (std::size_t s = 0; s < n_samples; ++s) {
        NormalSampler normal(stream_seed(seed, kBankStream, s));
        double* out = values.data() + s * n_nodes * d;
        std::fill(z.begin(), z.end(), 0.0); // Z(0) = 0
        std::fill(out, out + d, 0.0);
        for (std::size_t j = 1; j < n_nodes; ++j) {
            for (std::size_t m = 0; m < per_coarse; ++m) {
                for (std::size_t k = 0; k < d; ++k) {
                    z[k] = decay[k] * z[k] + noise[k] * normal();
                }
            }
            std::memcpy(out + j * d, z.data(), d * sizeof(double));
        }
    }

    BankMeta meta;
    meta.d = static_cast<std::uint32_t>(d);
    meta.n_samples = n_samples;
    meta.n_coarse = grid.n_coarse;
    meta.horizon_T = model.horizon_T;
    meta.fine_dt = grid.fine_dt;
    meta.coarse_dt = grid.coarse_dt;
    meta.seed = seed;
    meta.mode = mode;
    meta.spectrum = model.spectrum;
    return GaussianBank(std::move(meta), std::move(values));
}

std::uint64_t bank_payload_checksum(const GaussianBank& bank) {
    return payload_checksum(bank.values());
}

void save_bank(const GaussianBank& bank, const std::filesystem::path& path) {
    const BankMeta& m = bank.meta();
    std::string header;
    header.append(kMagic, sizeof(kMagic));
    put_u32(header, m.version);
    put_u32(header, m.d);
    put_u64(header, m.n_samples);
    put_u64(header, m.n_coarse);
    put_f64(header, m.horizon_T);
    put_f64(header, m.fine_dt);
    put_f64(header, m.coarse_dt);
    put_u64(header, m.seed);
    put_u8(header, static_cast<std::uint8_t>(m.mode));
    for (double a : m.spectrum) put_f64(header, a);
    put_u64(header, payload_checksum(bank.values()));

    const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("bank: cannot open " + tmp.string() + " for writing");
        out.write(header.data(), static_cast<std::streamsize>(header.size()));
        if constexpr (std::endian::native == std::endian::little) {
            out.write(reinterpret_cast<const char*>(bank.values().data()),
                      static_cast<std::streamsize>(bank.values().size() * sizeof(double)));
        } else {
            std::string buf;
            buf.reserve(bank.values().size() * 8);
            for (double v : bank.values()) put_f64(buf, v);
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
        if (!out) throw FormatError("bank: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

GaussianBank load_bank(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("bank: cannot open " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* data = reinterpret_cast<const unsigned char*>(raw.data());

    if (raw.size() < sizeof(kMagic) || std::memcmp(raw.data(), kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("bank: bad magic in " + path.string());
    }

    Reader r(data + sizeof(kMagic), raw.size() - sizeof(kMagic));
    BankMeta meta;
    meta.version = r.u32();
    if (meta.version != 1) {
        throw FormatError("bank: unsupported version " + std::to_string(meta.version));
    }
    meta.d = r.u32();
    if (meta.d == 0) throw FormatError("bank: header d = 0");
    meta.n_samples = r.u64();
    meta.n_coarse = r.u64();
    meta.horizon_T = r.f64();
    meta.fine_dt = r.f64();
    meta.coarse_dt = r.f64();
    meta.seed = r.u64();
    const std::uint8_t mode = r.u8();
    if (mode > 1) throw FormatError("bank: unknown simulation mode byte");
    meta.mode = static_cast<SimulationMode>(mode);
    meta.spectrum.resize(meta.d);
    for (std::uint32_t k = 0; k < meta.d; ++k) meta.spectrum[k] = r.f64();
    const std::uint64_t stored_checksum = r.u64();

    const std::size_t count = static_cast<std::size_t>(meta.n_samples) *
                              (static_cast<std::size_t>(meta.n_coarse) + 1) * meta.d;
    if (r.remaining() != count * sizeof(double)) {
        throw FormatError("bank: payload size disagrees with header (have " +
                          std::to_string(r.remaining()) + " bytes, header implies " +
                          std::to_string(count * sizeof(double)) + ")");
    }

    std::vector<double> values(count);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(values.data(), r.cursor(), count * sizeof(double));
    } else {
        Reader pr(r.cursor(), r.remaining());
        for (std::size_t i = 0; i < count; ++i) values[i] = pr.f64();
    }

    if (payload_checksum(values) != stored_checksum) {
        throw FormatError("bank: payload checksum mismatch in " + path.string());
    }
    return GaussianBank(std::move(meta), std::move(values));
}

void lift_path(const GaussianBank& bank, std::size_t sample, std::span<const double> x,
               double sigma, std::size_t node_j, std::span<double> out) {
    const BankMeta& m = bank.meta();
    if (x.size() != m.d || out.size() != m.d) {
        throw std::invalid_argument("lift_path: x must have the bank dimension");
    }
    const auto z = bank.node(sample, node_j); // range-checks sample and node
    const double t = static_cast<double>(node_j) * m.coarse_dt;
    for (std::size_t k = 0; k < m.d; ++k) {
        out[k] = std::exp(-t * m.spectrum[k]) * x[k] + sigma * z[k];
    }
}

std::vector<double> lift_path(const GaussianBank& bank, std::size_t sample,
                              std::span<const double> x, double sigma, std::size_t node_j) {
    std::vector<double> out(bank.dim());
    lift_path(bank, sample, x, sigma, node_j, out);
    return out;
}

} // namespace kgsolve
