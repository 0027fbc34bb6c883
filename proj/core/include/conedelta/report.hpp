#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "conedelta/config.hpp"

namespace conedelta::report {

/// Rectangular numeric table with named columns (CSV/plot backing store).
struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

/// Merged, serializable view of one run: provenance + named scalar results,
/// string flags, and one or more tables (tables[0] backs the CSV output).
/// JSON round-trips losslessly (shortest-round-trip doubles).
struct SpectralReport {
    std::string version;
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<CsvTable> tables;
    std::vector<std::pair<std::string, double>> timings_ms;

    void add_scalar(const std::string& k, double v) { scalars.emplace_back(k, v); }
    void add_note(const std::string& k, const std::string& v) { notes.emplace_back(k, v); }
    double scalar(const std::string& k) const;  // throws when absent

    std::string to_json() const;
    static SpectralReport from_json(const std::string& text);

    /// Primary table, one header row, 15 significant digits.
    void write_csv(std::ostream& os) const;
    /// gnuplot-ready two-column data from the primary table.
    void write_plot_dat(std::ostream& os, const std::string& xcol,
                        const std::string& ycol) const;

    /// Writes <base>.csv and <base>.json (plus <base>.dat when requested).
    void write_files(const std::string& base, bool emit_plot, const std::string& xcol = "",
                     const std::string& ycol = "") const;
};

SpectralReport make_report(const RunConfig& cfg);

}  // namespace conedelta::report
