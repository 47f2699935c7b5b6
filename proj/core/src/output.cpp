#include "kgsolve/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgsolve/errors.hpp"

namespace kgsolve {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw FormatError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("moving_average: window must be odd and >= 1");
    }
    std::vector<double> out(series.size());
    const std::size_t hw = window / 2;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t lo = i >= hw ? i - hw : 0;
        const std::size_t hi = std::min(i + hw, series.size() - 1);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += series[j];
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

void write_solve_csv(const std::filesystem::path& path, const SeriesResult& result,
                     const GridSpec& grid) {
    std::string csv = "t,u_iter,stderr_iter,v_last,n_final\n";
    const auto& v_last = result.v_terms.back();
    for (std::size_t j = 0; j < result.u_final.size(); ++j) {
        csv += format_g17(grid.node_time(j));
        csv += ',';
        csv += format_g17(result.u_final[j].mean);
        csv += ',';
        csv += format_g17(result.u_final[j].std_error);
        csv += ',';
        csv += format_g17(v_last[j].mean);
        csv += ',';
        csv += std::to_string(result.n_final);
        csv += '\n';
    }
    atomic_write_text(path, csv);
}

void write_reference_csv(const std::filesystem::path& path, const ReferenceRun& run,
                         const GridSpec& grid) {
    std::string csv = "t,u_ref,stderr_ref\n";
    for (std::size_t j = 0; j < run.u.size(); ++j) {
        csv += format_g17(grid.node_time(j));
        csv += ',';
        csv += format_g17(run.u[j].mean);
        csv += ',';
        csv += format_g17(run.u[j].std_error);
        csv += '\n';
    }
    atomic_write_text(path, csv);
}

void write_solve_summary_json(const std::filesystem::path& path, const RunConfig& cfg,
                              const SeriesResult& result, const GridSpec& grid) {
    nlohmann::json j;
    j["config"] = config_echo(cfg);
    j["metric"] = to_string(result.metric);
    j["n_final"] = result.n_final;
    j["converged"] = result.converged;
    j["err_history"] = result.err_history;
    j["t_final"] = grid.node_time(result.u_final.size() - 1);
    j["u_T"] = result.u_final.back().mean;
    j["stderr_T"] = result.u_final.back().std_error;
    j["n_samples"] = result.u_final.back().n_samples;
    atomic_write_text(path, j.dump(2) + "\n");
}

void write_solve_timings_json(const std::filesystem::path& path, double bank_seconds,
                              const SeriesResult& result) {
    nlohmann::json j;
    j["bank_seconds"] = bank_seconds;
    j["iteration_seconds"] = result.timings.iteration_seconds;
    j["total_solve_seconds"] = result.timings.total_seconds;
    atomic_write_text(path, j.dump(2) + "\n");
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw FormatError("csv: no column named '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("csv: cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("csv: empty file " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FormatError("csv: bad number '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != table.header.size()) {
            throw FormatError("csv: ragged row in " + path.string());
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace kgsolve
