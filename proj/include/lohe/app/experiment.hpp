#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lohe/analysis.hpp"
#include "lohe/app/config.hpp"

namespace lohe::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitInvariant = 4 };

/// Everything a run produced, kept in memory for callers and tests.
struct ExperimentResult {
    int exit_code = kExitOk;
    std::string failed_stage;  // empty on success
    std::string error_message;

    Index nodes = 0;
    std::size_t components = 0;
    bool spanning_tree = false;
    bool hemisphere_found = false;
    double final_diameter = 0.0;
    double riccati_max_deviation = 0.0;
    double max_norm_drift = 0.0;
    std::optional<DecayReport> report;
    std::optional<double> epsilon;

    Trajectory trajectory;          // raw frame
    std::optional<Trajectory> rotated;  // present when omega is active
    std::vector<double> total_error;
    std::string summary_path;
};

/// Runs the pipeline: graph analysis, hemisphere certificate, integration,
/// error extraction, Riccati cross-check, beta weights and decay certificate.
/// Writes states.csv, errors.csv, total_error.csv, summary.txt (and
/// states_rotated.csv / SVG plots when requested) into cfg.output_dir.
/// Stage failures are reported through exit_code, never thrown.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Builds the digraph named by the configuration.
Digraph load_graph(const ExperimentConfig& cfg);

/// Initial state from file, or seeded hemisphere sampling.
StateMatrix load_initial_state(const ExperimentConfig& cfg, Index m);

/// Parses a key=value summary file.
std::vector<std::pair<std::string, std::string>> read_summary(const std::string& path);

/// Command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace lohe::app
