#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kgsolve/config.hpp"
#include "kgsolve/iteration.hpp"
#include "kgsolve/reference.hpp"

namespace kgsolve {

/// Full-precision decimal float (17 significant digits, lossless round-trip).
std::string format_g17(double v);

/// Write content to path via a temp file in the same directory plus rename.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// Centered moving average with truncated windows at the edges; window must
/// be odd, window = 1 is the identity.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

// Result files. CSVs carry one row per coarse node, 17-significant-digit
// floats. Wall-clock timings go to their own file so result and summary
// artifacts are byte-stable across reruns.

void write_solve_csv(const std::filesystem::path& path, const SeriesResult& result,
                     const GridSpec& grid);
void write_reference_csv(const std::filesystem::path& path, const ReferenceRun& run,
                         const GridSpec& grid);
void write_solve_summary_json(const std::filesystem::path& path, const RunConfig& cfg,
                              const SeriesResult& result, const GridSpec& grid);
void write_solve_timings_json(const std::filesystem::path& path, double bank_seconds,
                              const SeriesResult& result);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const; // throws FormatError
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace kgsolve
