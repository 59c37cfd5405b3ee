#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lohe/analysis.hpp"
#include "lohe/dynamics.hpp"

namespace lohe::app {

struct ExperimentConfig {
    std::string graph_source{"paper-fig1"};  // builtin scenario name or graph file path
    int n = 3;
    double k = 1.0;
    bool with_omega = false;
    std::string omega_source;  // empty: builtin matrix of the scenario
    std::optional<std::string> init_path;
    std::uint64_t seed = 42;
    double hemisphere_margin = 0.2;
    double dt = 1e-3;
    double t_end = 50.0;
    int record_every = 10;
    std::optional<double> epsilon;  // absent: search
    double eta = kDefaultEta;
    std::string output_dir;
    bool plots = false;

    /// Throws ValidationError naming the violated constraint.
    void validate() const;
    SimConfig sim() const { return {dt, t_end, record_every}; }
    bool builtin_graph() const;
};

/// Applies `key = value` lines ('#' comments, no sections) onto `cfg`.
void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Sets one field from its textual value; ParseError on bad syntax.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value,
               const std::string& source = "<config>", int line = 0);

/// Default output root: $LOHE_SYNC_OUT or "lohe_out".
std::string default_output_root();

}  // namespace lohe::app
