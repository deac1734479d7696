#pragma once

// Plain-text file formats and plot emission.
//
// Numeric files are whitespace-tokenized with '#' comments. Matrix blocks are
// "NAME rows cols" followed by rows*cols numbers in row-major order.
//
//   system file:  dims n m p Z, optional label, blocks A0, A1..AZ, B0..BZ,
//                 C0..CZ, D0..DZ (missing blocks are zero)
//   model file:   dim Z, mean 1 Z, covariance Z Z
//   gram file:    dims n m, gram (n+m)n (n+m)n
//   gain file:    F m n
//
// Config files are INI-style: [section] headers and key = value lines; values
// may be scalars, words, or whitespace-separated numeric lists.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rds/identify.hpp"
#include "rds/simulate.hpp"
#include "rds/synthesis.hpp"
#include "rds/system.hpp"
#include "rds/types.hpp"

namespace rds {

// ---- atomic text output -------------------------------------------------

// Writes to "<path>.tmp" then renames over the target.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// ---- numeric files ------------------------------------------------------

RandomLinearSystem read_system_file(const std::filesystem::path& path);
std::string format_system_file(const RandomLinearSystem& sys);

DistributionModel read_model_file(const std::filesystem::path& path);
std::string format_model_file(const DistributionModel& model);

GramMatrix read_gram_file(const std::filesystem::path& path);
std::string format_gram_file(const GramMatrix& gram);

Matrix read_gain_file(const std::filesystem::path& path);
std::string format_gain_file(const Matrix& F);

// ---- CSV ----------------------------------------------------------------

std::string format_identification_trace_csv(const IdentificationResult& result);
std::string format_trajectory_csv(const Trajectory& traj);
std::string format_rms_csv(const MonteCarloStats& stats);

// ---- reports ------------------------------------------------------------

std::string format_synthesis_report(const SynthesisResult& res, Index nbar);
std::string format_analysis_report(const AnalysisResult& res);

// ---- SVG line plots -----------------------------------------------------

struct PlotSeries {
    std::string label;
    std::vector<double> values;
};

// Minimal polyline document: one polyline per series over x = 0..N-1.
std::string format_line_plot_svg(const std::string& title, const std::vector<PlotSeries>& series);

// ---- config -------------------------------------------------------------

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
};

struct ConfigMap {
    std::vector<ConfigSection> sections;

    const ConfigSection* find(const std::string& name) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = {}) const;
    double get_number(const std::string& section, const std::string& key,
                      std::optional<double> fallback = {}) const;
    long get_integer(const std::string& section, const std::string& key,
                     std::optional<long> fallback = {}) const;
    bool get_flag(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_numbers(const std::string& section, const std::string& key) const;
};

ConfigMap parse_config(const std::string& text);
ConfigMap read_config_file(const std::filesystem::path& path);
std::string serialize_config(const ConfigMap& cfg);

}  // namespace rds
