#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "hartree/eigen.hpp"
#include "hartree/groundstate.hpp"
#include "hartree/sweep.hpp"

namespace hartree {

/// Plain key=value pairs; '#' starts a comment.
using Config = std::map<std::string, std::string>;

Config parse_config(std::istream& in);
Config read_config(const std::filesystem::path& path);

const std::string& require_key(const Config& cfg, const std::string& key);
double config_double(const Config& cfg, const std::string& key, double fallback);
int config_int(const Config& cfg, const std::string& key, int fallback);
std::vector<double> parse_number_list(const std::string& text);

enum class OutPolicy { overwrite, fail };
OutPolicy parse_out_policy(const std::string& text);

/// Creates the directory; under OutPolicy::fail an existing non-empty directory is an IoError.
void prepare_out_dir(const std::filesystem::path& dir, OutPolicy policy);

/// Shortest text that round-trips the double.
std::string csv_number(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// groundstate.csv (r, u) and groundstate_meta.txt.
void write_ground_state(const std::filesystem::path& dir, const GroundState& state);
/// spectrum.csv (i, lambda, ell, multiplicity) for the first count entries and profiles/pair_<k>.csv.
void write_spectrum(const std::filesystem::path& dir, const Spectrum& spectrum, const RadialGrid& grid, int count);
void write_sweep(const std::filesystem::path& dir, const SweepTable& table);
void write_fits(const std::filesystem::path& dir, const FitReport& report);
/// plots/*.svg, one chart per fitted quantity against eps.
void write_plots(const std::filesystem::path& dir, const SweepTable& table, const FitReport& report);
/// manifest.txt with the command, the config echo, library versions and wall time.
void write_manifest(const std::filesystem::path& dir, const std::string& command, const Config& cfg,
                    double wall_seconds);

struct ChartSeries {
    std::string name;
    std::vector<double> y;
};

std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<double>& x, const std::vector<ChartSeries>& series, bool logx = false,
                           bool logy = false);

}  // namespace hartree
