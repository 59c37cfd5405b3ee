#include "lohe/app/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lohe/scenario.hpp"

namespace lohe::app {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, const std::string& source, int line) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError(source, line, "field '" + key + "': cannot parse '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value, const std::string& source, int line) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ParseError(source, line, "field '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace

bool ExperimentConfig::builtin_graph() const { return graph_source == scenario::kPaperFig1; }

void ExperimentConfig::validate() const {
    if (graph_source.empty()) throw ValidationError("graph: a scenario name or graph file is required");
    if (n < 2) throw ValidationError("n: ambient dimension must be at least 2");
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("k: coupling gain must be positive");
    if (!(hemisphere_margin >= 0.0 && hemisphere_margin < 1.0)) {
        throw ValidationError("hemisphere_margin: must lie in [0, 1)");
    }
    sim().validate();
    if (record_every * dt > kMaxCertificateSpacing * (1.0 + 1e-9)) {
        throw ValidationError("record_every * dt must not exceed 0.01 for decay certificates");
    }
    if (epsilon && (!(*epsilon > 0.0) || !std::isfinite(*epsilon))) {
        throw ValidationError("epsilon: must be positive");
    }
    if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta: must lie in (0, 1)");
    if (with_omega && omega_source.empty() && !builtin_graph()) {
        throw ValidationError("with_omega: a matrix file is required outside the built-in scenario");
    }
    if (with_omega && omega_source.empty() && n != scenario::kPaperFig1Dimension) {
        throw ValidationError("with_omega: the built-in matrix is 3 x 3, so n must be 3");
    }
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value, const std::string& source,
               int line) {
    if (key == "graph" || key == "scenario") {
        cfg.graph_source = value;
    } else if (key == "n") {
        cfg.n = parse_number<int>(key, value, source, line);
    } else if (key == "k") {
        cfg.k = parse_number<double>(key, value, source, line);
    } else if (key == "omega") {
        if (value == "none") {
            cfg.with_omega = false;
        } else {
            cfg.with_omega = true;
            cfg.omega_source = value == "builtin" ? std::string{} : value;
        }
    } else if (key == "init") {
        cfg.init_path = value;
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value, source, line);
        cfg.init_path.reset();
    } else if (key == "hemisphere_margin") {
        cfg.hemisphere_margin = parse_number<double>(key, value, source, line);
    } else if (key == "dt") {
        cfg.dt = parse_number<double>(key, value, source, line);
    } else if (key == "t_end") {
        cfg.t_end = parse_number<double>(key, value, source, line);
    } else if (key == "record_every") {
        cfg.record_every = parse_number<int>(key, value, source, line);
    } else if (key == "epsilon") {
        if (value == "auto") {
            cfg.epsilon.reset();
        } else {
            cfg.epsilon = parse_number<double>(key, value, source, line);
        }
    } else if (key == "eta") {
        cfg.eta = parse_number<double>(key, value, source, line);
    } else if (key == "out") {
        cfg.output_dir = value;
    } else if (key == "plots") {
        cfg.plots = parse_bool(key, value, source, line);
    } else {
        throw ParseError(source, line, "unknown field '" + key + "'");
    }
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string body = trim(raw);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(source, line, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ParseError(source, line, "missing key before '='");
        if (value.empty()) throw ParseError(source, line, "field '" + key + "' has no value");
        set_field(cfg, key, value, source, line);
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open config file");
    std::ostringstream text;
    text << f.rdbuf();
    apply_config_text(cfg, text.str(), path);
}

std::string default_output_root() {
    if (const char* env = std::getenv("LOHE_SYNC_OUT"); env && *env) return env;
    return "lohe_out";
}

}  // namespace lohe::app
