#include "kgsolve/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "kgsolve/errors.hpp"
#include "kgsolve/output.hpp"

namespace kgsolve {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a nonnegative integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("config: key '" + key + "' has an empty list entry");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects at least one value");
    return out;
}

// Scalar entries broadcast to length d; lists must match d exactly.
std::vector<double> parse_vector(const std::string& key, const std::string& v, std::size_t d) {
    auto list = parse_list(key, v);
    if (list.size() == 1) return std::vector<double>(d, list[0]);
    if (list.size() != d) {
        throw ConfigError("config: key '" + key + "' has " + std::to_string(list.size()) +
                          " entries, expected d = " + std::to_string(d));
    }
    return list;
}

bool is_uniform(const std::vector<double>& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

// Canonical application order; scalars and d first so vector keys can
// broadcast, regardless of the order keys appear in the file.
constexpr std::array kKeyOrder = {
    "d",          "spectrum",     "sigma",        "horizon_T",  "fine_dt",
    "coarse_dt",  "nonlinearity", "poly_p",       "b_const",    "ybar",
    "declared_sup", "initial_datum", "threshold_H", "trig_h",   "x0",
    "n_samples",  "tol",          "max_iters",    "seed",       "metric",
    "mode",       "bank",         "out",          "sigma_sweep",
    "x_perturbations", "sweep_reference", "degrade_tol",
};

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.model.d = 10;
    cfg.model.spectrum = default_spectrum(10);
    cfg.model.sigma = 1.0;
    cfg.model.horizon_T = 1.0;
    cfg.model.nonlinearity = Nonlinearity::sine();
    cfg.model.initial_datum = InitialDatum::threshold(1.0);
    cfg.model.x0.assign(10, 1.0);
    cfg.grid = GridSpec::make(1.0, 1e-4, 1e-2);
    cfg.n_samples = 100000;
    cfg.tol = 1e-3;
    cfg.max_iters = 100;
    cfg.seed = 42;
    cfg.metric = StoppingMetric::sup_t;
    cfg.mode = SimulationMode::euler;
    cfg.bank_path = "bank.kgb";
    cfg.out_path = "run";
    return cfg;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    ModelSpec& m = cfg.model;
    if (key == "d") {
        const std::size_t d = static_cast<std::size_t>(parse_u64(key, value));
        if (d == 0) throw ConfigError("config: d must be positive");
        m.d = d;
        m.spectrum = default_spectrum(d);
        // uniform dependent vectors follow the new dimension
        for (auto* v : {&m.x0, &m.nonlinearity.b, &m.nonlinearity.ybar, &m.initial_datum.h}) {
            if (is_uniform(*v)) v->assign(d, (*v)[0]);
        }
    } else if (key == "spectrum") {
        m.spectrum = (trim(value) == "default") ? default_spectrum(m.d)
                                                : parse_vector(key, value, m.d);
    } else if (key == "sigma") {
        m.sigma = parse_double(key, value);
    } else if (key == "horizon_T") {
        m.horizon_T = parse_double(key, value);
        cfg.grid = GridSpec::make(m.horizon_T, cfg.grid.fine_dt, cfg.grid.coarse_dt);
    } else if (key == "fine_dt") {
        cfg.grid = GridSpec::make(m.horizon_T, parse_double(key, value), cfg.grid.coarse_dt);
    } else if (key == "coarse_dt") {
        cfg.grid = GridSpec::make(m.horizon_T, cfg.grid.fine_dt, parse_double(key, value));
    } else if (key == "nonlinearity") {
        const std::string kind = trim(value);
        if (kind == "zero") {
            m.nonlinearity = Nonlinearity::zero();
        } else if (kind == "constant") {
            auto b = m.nonlinearity.b.size() == m.d ? m.nonlinearity.b
                                                    : std::vector<double>(m.d, 0.0);
            m.nonlinearity = Nonlinearity::constant(std::move(b));
        } else if (kind == "sine") {
            m.nonlinearity = Nonlinearity::sine();
        } else if (kind == "sine_skew") {
            m.nonlinearity = Nonlinearity::sine_skew(m.nonlinearity.declared_sup);
        } else if (kind == "poly_bounded") {
            auto ybar = m.nonlinearity.ybar.size() == m.d ? m.nonlinearity.ybar
                                                          : std::vector<double>(m.d, 2.0);
            m.nonlinearity = Nonlinearity::poly_bounded(std::move(ybar), m.nonlinearity.p);
        } else {
            throw ConfigError("config: unknown nonlinearity '" + kind + "'");
        }
    } else if (key == "poly_p") {
        m.nonlinearity.p = parse_double(key, value);
    } else if (key == "b_const") {
        m.nonlinearity.b = parse_vector(key, value, m.d);
    } else if (key == "ybar") {
        m.nonlinearity.ybar = parse_vector(key, value, m.d);
    } else if (key == "declared_sup") {
        if (trim(value) == "none") {
            m.nonlinearity.declared_sup.reset();
        } else {
            m.nonlinearity.declared_sup = parse_double(key, value);
        }
    } else if (key == "initial_datum") {
        const std::string kind = trim(value);
        if (kind == "threshold") {
            m.initial_datum = InitialDatum::threshold(m.initial_datum.H);
        } else if (kind == "trig") {
            auto h = m.initial_datum.h.size() == m.d ? m.initial_datum.h
                                                     : std::vector<double>(m.d, 1.0);
            m.initial_datum = InitialDatum::trig(std::move(h));
        } else {
            throw ConfigError("config: unknown initial datum '" + kind + "'");
        }
    } else if (key == "threshold_H") {
        m.initial_datum.H = parse_double(key, value);
    } else if (key == "trig_h") {
        m.initial_datum.h = parse_vector(key, value, m.d);
    } else if (key == "x0") {
        m.x0 = parse_vector(key, value, m.d);
    } else if (key == "n_samples") {
        cfg.n_samples = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "tol") {
        cfg.tol = parse_double(key, value);
    } else if (key == "max_iters") {
        cfg.max_iters = static_cast<int>(parse_u64(key, value));
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "metric") {
        const std::string v = trim(value);
        if (v == "sup_t") cfg.metric = StoppingMetric::sup_t;
        else if (v == "endpoint") cfg.metric = StoppingMetric::endpoint;
        else throw ConfigError("config: metric must be sup_t or endpoint, got '" + v + "'");
    } else if (key == "mode") {
        const std::string v = trim(value);
        if (v == "euler") cfg.mode = SimulationMode::euler;
        else if (v == "exact") cfg.mode = SimulationMode::exact;
        else throw ConfigError("config: mode must be euler or exact, got '" + v + "'");
    } else if (key == "bank") {
        cfg.bank_path = trim(value);
    } else if (key == "out") {
        cfg.out_path = trim(value);
    } else if (key == "sigma_sweep") {
        cfg.sigma_sweep = parse_list(key, value);
    } else if (key == "x_perturbations") {
        cfg.x_perturbations = parse_list(key, value);
    } else if (key == "sweep_reference") {
        cfg.sweep_reference = parse_bool(key, value);
    } else if (key == "degrade_tol") {
        cfg.degrade_tol = parse_double(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());

    std::vector<std::pair<std::string, std::string>> pairs;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not a key = value pair");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
        if (!seen.insert(key).second) {
            throw ConfigError("config: duplicate key '" + key + "'");
        }
        if (std::find(kKeyOrder.begin(), kKeyOrder.end(), key) == kKeyOrder.end()) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
        pairs.emplace_back(std::move(key), std::move(value));
    }

    RunConfig cfg = default_config();
    for (const char* key : kKeyOrder) {
        for (const auto& [k, v] : pairs) {
            if (k == key) apply_key(cfg, k, v);
        }
    }
    return cfg;
}

void RunConfig::validate() const {
    model.validate();
    grid.validate(model.horizon_T);
    if (n_samples == 0) throw ConfigError("config: n_samples must be > 0");
    if (!(tol > 0.0)) throw ConfigError("config: tol must be > 0");
    if (max_iters < 1) throw ConfigError("config: max_iters must be >= 1");
    if (!(degrade_tol > 0.0)) throw ConfigError("config: degrade_tol must be > 0");
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
    auto join = [](const std::vector<double>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += format_g17(v[i]);
        }
        return out;
    };

    std::map<std::string, std::string> echo;
    echo["d"] = std::to_string(cfg.model.d);
    echo["spectrum"] = join(cfg.model.spectrum);
    echo["sigma"] = format_g17(cfg.model.sigma);
    echo["horizon_T"] = format_g17(cfg.model.horizon_T);
    echo["fine_dt"] = format_g17(cfg.grid.fine_dt);
    echo["coarse_dt"] = format_g17(cfg.grid.coarse_dt);
    echo["nonlinearity"] = to_string(cfg.model.nonlinearity.kind);
    echo["poly_p"] = format_g17(cfg.model.nonlinearity.p);
    if (!cfg.model.nonlinearity.b.empty()) echo["b_const"] = join(cfg.model.nonlinearity.b);
    if (!cfg.model.nonlinearity.ybar.empty()) echo["ybar"] = join(cfg.model.nonlinearity.ybar);
    echo["declared_sup"] = cfg.model.nonlinearity.declared_sup
                               ? format_g17(*cfg.model.nonlinearity.declared_sup)
                               : "none";
    echo["initial_datum"] = to_string(cfg.model.initial_datum.kind);
    echo["threshold_H"] = format_g17(cfg.model.initial_datum.H);
    if (!cfg.model.initial_datum.h.empty()) echo["trig_h"] = join(cfg.model.initial_datum.h);
    echo["x0"] = join(cfg.model.x0);
    echo["n_samples"] = std::to_string(cfg.n_samples);
    echo["tol"] = format_g17(cfg.tol);
    echo["max_iters"] = std::to_string(cfg.max_iters);
    echo["seed"] = std::to_string(cfg.seed);
    echo["metric"] = to_string(cfg.metric);
    echo["mode"] = to_string(cfg.mode);
    echo["bank"] = cfg.bank_path.string();
    echo["out"] = cfg.out_path.string();
    if (!cfg.sigma_sweep.empty()) echo["sigma_sweep"] = join(cfg.sigma_sweep);
    if (!cfg.x_perturbations.empty()) echo["x_perturbations"] = join(cfg.x_perturbations);
    echo["sweep_reference"] = cfg.sweep_reference ? "true" : "false";
    echo["degrade_tol"] = format_g17(cfg.degrade_tol);
    return echo;
}

} // namespace kgsolve
