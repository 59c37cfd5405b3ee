#include "lohe/app/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "lohe/app/plots.hpp"
#include "lohe/error_dynamics.hpp"
#include "lohe/io.hpp"
#include "lohe/scenario.hpp"

namespace lohe::app {

namespace fs = std::filesystem;

namespace {

constexpr double kRiccatiTolerance = 1e-6;

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
        dynamic_cast<const NoSpanningTree*>(&e)) {
        return kExitConfig;
    }
    if (dynamic_cast<const InvariantViolation*>(&e)) return kExitInvariant;
    return kExitNumeric;
}

// Runs one stage; on failure records the stage and returns false.
bool stage(ExperimentResult& res, const char* name, const std::function<void()>& body) {
    try {
        body();
        return true;
    } catch (const std::exception& e) {
        res.exit_code = exit_code_for(e);
        res.failed_stage = name;
        res.error_message = e.what();
        return false;
    }
}

template <class Fn>
void write_to(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    fn(out);
    if (!out) throw Error("failed writing " + path.string());
}

void print_failure(std::ostream& os, const ExperimentResult& res) {
    os << "stage=" << res.failed_stage << '\n' << "error=" << res.error_message << '\n';
}

}  // namespace

Digraph load_graph(const ExperimentConfig& cfg) {
    if (cfg.builtin_graph()) return scenario::paper_fig1_graph();
    return io::read_graph(cfg.graph_source);
}

StateMatrix load_initial_state(const ExperimentConfig& cfg, Index m) {
    if (cfg.init_path) {
        StateMatrix s = io::read_state(*cfg.init_path);
        if (s.m() != m || s.n() != cfg.n) {
            throw ValidationError("init: state file is " + std::to_string(s.m()) + " x " + std::to_string(s.n()) +
                                  ", expected " + std::to_string(m) + " x " + std::to_string(cfg.n));
        }
        return s;
    }
    return sample_hemisphere_states(m, cfg.n, cfg.seed, cfg.hemisphere_margin);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    if (!stage(res, "config", [&] { cfg.validate(); })) return res;

    const fs::path out_dir = cfg.output_dir.empty() ? fs::path(default_output_root()) : fs::path(cfg.output_dir);
    if (!stage(res, "output", [&] { fs::create_directories(out_dir); })) return res;

    std::optional<Digraph> graph;
    std::optional<Condensation> cond;
    if (!stage(res, "graph", [&] {
            graph = load_graph(cfg);
            cond = condensation(*graph);
            res.nodes = graph->size();
            res.components = cond->block_count();
            res.spanning_tree = has_spanning_tree(*cond);
            if (!res.spanning_tree) {
                throw NoSpanningTree("digraph has " + std::to_string(cond->source_count) +
                                     " source components; synchronisation needs a directed spanning tree");
            }
        })) {
        return res;
    }

    ModelParams params{cfg.k, std::nullopt};
    if (!stage(res, "omega", [&] {
            if (!cfg.with_omega) return;
            params.omega = cfg.omega_source.empty() ? scenario::paper_fig1_omega() : io::read_omega(cfg.omega_source);
            if (params.omega->rows() != cfg.n) throw ValidationError("omega: dimension differs from n");
            params.validate();
        })) {
        return res;
    }

    std::optional<StateMatrix> init;
    if (!stage(res, "init", [&] {
            init = load_initial_state(cfg, graph->size());
            res.hemisphere_found = hemisphere_certificate(*init).has_value();
        })) {
        return res;
    }

    if (!stage(res, "integrate", [&] { res.trajectory = integrate(*init, *graph, params, cfg.sim()); })) return res;

    const Trajectory* analysed = &res.trajectory;
    if (params.omega) {
        if (!stage(res, "rotate", [&] { res.rotated = rotate_frame(res.trajectory, *params.omega); })) return res;
        analysed = &*res.rotated;
    }

    std::vector<ErrorMatrix> errors;
    if (!stage(res, "errors", [&] {
            errors.reserve(res.trajectory.size());
            for (const auto& s : res.trajectory.states) {
                errors.push_back(error_from_states(s));
                for (Index i = 0; i < s.m(); ++i) {
                    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(s.row(i).norm() - 1.0));
                }
            }
            res.final_diameter = sync_diameter(res.trajectory.states.back());
        })) {
        return res;
    }

    if (!stage(res, "riccati", [&] {
            const auto ric = integrate_riccati(errors.front(), *graph, cfg.k, cfg.sim());
            if (ric.size() != errors.size()) throw InvariantViolation("Riccati samples misaligned with trajectory");
            for (std::size_t p = 0; p < ric.size(); ++p) {
                const double dev = (ric[p].e.matrix() - errors[p].matrix()).cwiseAbs().maxCoeff();
                res.riccati_max_deviation = std::max(res.riccati_max_deviation, dev);
            }
            if (res.riccati_max_deviation > kRiccatiTolerance) {
                throw InvariantViolation("Riccati solution deviates from trajectory errors by " +
                                         format_double(res.riccati_max_deviation));
            }
        })) {
        return res;
    }

    if (!stage(res, "certificate", [&] {
            if (cfg.epsilon) {
                RegionSpec spec{cfg.eta, beta_weights(*cond, *graph, *cfg.epsilon)};
                res.report = decay_certificate(*analysed, *graph, *cond, cfg.k, spec);
                res.epsilon = *cfg.epsilon;
            } else {
                try {
                    auto found = epsilon_search(*analysed, *graph, *cond, cfg.k, cfg.eta);
                    res.report = found.report;
                    res.epsilon = found.epsilon;
                } catch (const NoFeasibleEpsilon& e) {
                    res.report = e.last_report();
                    res.epsilon = e.last_report().epsilon;
                }
            }
            res.total_error = total_error_series(*analysed, beta_weights(*cond, *graph, *res.epsilon));
        })) {
        return res;
    }

    if (!stage(res, "write", [&] {
            std::vector<double> times = res.trajectory.times;
            write_to(out_dir / "states.csv", [&](std::ostream& o) { io::write_states_csv(o, res.trajectory); });
            if (res.rotated) {
                write_to(out_dir / "states_rotated.csv", [&](std::ostream& o) { io::write_states_csv(o, *res.rotated); });
            }
            write_to(out_dir / "errors.csv", [&](std::ostream& o) { io::write_errors_csv(o, times, errors); });
            write_to(out_dir / "total_error.csv",
                     [&](std::ostream& o) { io::write_series_csv(o, "t", "V", times, res.total_error); });

            res.summary_path = (out_dir / "summary.txt").string();
            write_to(res.summary_path, [&](std::ostream& o) {
                o << "graph=" << cfg.graph_source << '\n'
                  << "nodes=" << res.nodes << '\n'
                  << "dimension=" << cfg.n << '\n'
                  << "k=" << format_double(cfg.k) << '\n'
                  << "omega=" << (params.omega ? "on" : "off") << '\n'
                  << "init=" << (cfg.init_path ? *cfg.init_path : "seed:" + std::to_string(cfg.seed)) << '\n'
                  << "dt=" << format_double(cfg.dt) << '\n'
                  << "t_end=" << format_double(cfg.t_end) << '\n'
                  << "record_every=" << cfg.record_every << '\n'
                  << "eta=" << format_double(cfg.eta) << '\n'
                  << "components=" << res.components << '\n'
                  << "spanning_tree=" << (res.spanning_tree ? "true" : "false") << '\n'
                  << "hemisphere=" << (res.hemisphere_found ? "found" : "absent") << '\n'
                  << "final_diameter=" << format_double(res.final_diameter) << '\n'
                  << "max_norm_drift=" << format_double(res.max_norm_drift) << '\n'
                  << "riccati_max_deviation=" << format_double(res.riccati_max_deviation) << '\n';
            });
            std::ofstream append(res.summary_path, std::ios::app | std::ios::binary);
            append << res.report->serialize();
            if (!append) throw Error("failed appending to " + res.summary_path);
        })) {
        return res;
    }

    if (cfg.plots && !stage(res, "plots", [&] { emit_plots(out_dir.string()); })) return res;

    if (res.report->status == CertificateStatus::fail) {
        res.exit_code = kExitNumeric;
        res.failed_stage = "certificate";
        res.error_message = "decay certificate failed: " + res.report->detail;
    }
    return res;
}

std::vector<std::pair<std::string, std::string>> read_summary(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open summary");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(f, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return out;
}

namespace {

struct FlagValues {
    std::string config, scenario, graph, n, k, init, seed, dt, t_end, record_every, epsilon, eta, out, margin, batch;
    std::string omega;
    bool plots = false;
};

int report_and_exit(const ExperimentResult& res, const std::string& label) {
    if (!label.empty()) std::cout << "run=" << label << '\n';
    if (!res.summary_path.empty()) {
        std::ifstream f(res.summary_path);
        std::cout << f.rdbuf();
    }
    if (res.exit_code != kExitOk) print_failure(std::cerr, res);
    return res.exit_code;
}

int run_batch(const std::string& batch_file, const ExperimentConfig& base, const std::string& root) {
    std::ifstream f(batch_file);
    if (!f) {
        std::cerr << "stage=config\nerror=cannot open batch file " << batch_file << '\n';
        return kExitConfig;
    }
    std::vector<std::string> entries;
    for (std::string line; std::getline(f, line);) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (!line.empty()) entries.push_back(line);
    }

    struct Job {
        std::string label;
        ExperimentConfig cfg;
        std::optional<ExperimentResult> parse_failure;
    };
    std::vector<Job> jobs;
    for (const auto& entry : entries) {
        Job job{fs::path(entry).stem().string(), base, std::nullopt};
        job.cfg.output_dir.clear();
        try {
            apply_config_file(job.cfg, entry);
        } catch (const std::exception& e) {
            ExperimentResult r;
            r.exit_code = kExitConfig;
            r.failed_stage = "config";
            r.error_message = e.what();
            job.parse_failure = r;
        }
        if (job.cfg.output_dir.empty()) job.cfg.output_dir = (fs::path(root) / job.label).string();
        jobs.push_back(std::move(job));
    }

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<ExperimentResult> results(jobs.size());
    for (std::size_t start = 0; start < jobs.size(); start += workers) {
        std::vector<std::future<ExperimentResult>> running;
        const std::size_t stop = std::min(jobs.size(), start + workers);
        for (std::size_t j = start; j < stop; ++j) {
            if (jobs[j].parse_failure) {
                std::promise<ExperimentResult> ready;
                ready.set_value(*jobs[j].parse_failure);
                running.push_back(ready.get_future());
            } else {
                running.push_back(std::async(std::launch::async, run_experiment, jobs[j].cfg));
            }
        }
        for (std::size_t j = start; j < stop; ++j) results[j] = running[j - start].get();
    }

    int worst = kExitOk;
    for (std::size_t j = 0; j < jobs.size(); ++j) worst = std::max(worst, report_and_exit(results[j], jobs[j].label));
    return worst;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Lohe-model synchronisation simulator and exponential-decay certificates", "lohe_sync"};
    FlagValues fv;
    app.add_option("--config", fv.config, "key = value configuration file (flags override it)");
    auto* scenario_opt = app.add_option("--scenario", fv.scenario, "built-in scenario (paper-fig1)");
    auto* graph_opt = app.add_option("--graph", fv.graph, "graph file ('nodes m' then 'j i w' lines)");
    scenario_opt->excludes(graph_opt);
    app.add_option("--n", fv.n, "ambient dimension");
    app.add_option("--k", fv.k, "coupling gain");
    auto* omega_opt = app.add_option("--with-omega", fv.omega, "enable the common rotation (optional matrix file)")
                          ->expected(0, 1);
    auto* init_opt = app.add_option("--init", fv.init, "initial state file");
    auto* seed_opt = app.add_option("--seed", fv.seed, "seed for hemisphere-random initial states");
    init_opt->excludes(seed_opt);
    app.add_option("--hemisphere-margin", fv.margin, "minimum v . r_i of sampled initial states");
    app.add_option("--dt", fv.dt, "RK4 step");
    app.add_option("--t-end", fv.t_end, "horizon");
    app.add_option("--record-every", fv.record_every, "sampling stride in steps");
    app.add_option("--epsilon", fv.epsilon, "beta weight scale (omit to search)");
    app.add_option("--eta", fv.eta, "region parameter in (0, 1)");
    app.add_option("--out", fv.out, "output directory (default $LOHE_SYNC_OUT or ./lohe_out)");
    app.add_flag("--plots", fv.plots, "write SVG plots");
    app.add_option("--batch", fv.batch, "file listing config files to run, one per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "stage=config\nerror=" << e.what() << '\n';
        return kExitConfig;
    }

    ExperimentConfig cfg;
    try {
        if (!fv.config.empty()) apply_config_file(cfg, fv.config);
        const std::pair<const std::string*, const char*> fields[] = {
            {&fv.scenario, "scenario"}, {&fv.graph, "graph"}, {&fv.n, "n"}, {&fv.k, "k"},
            {&fv.init, "init"}, {&fv.seed, "seed"}, {&fv.margin, "hemisphere_margin"}, {&fv.dt, "dt"},
            {&fv.t_end, "t_end"}, {&fv.record_every, "record_every"}, {&fv.epsilon, "epsilon"},
            {&fv.eta, "eta"}, {&fv.out, "out"}};
        for (const auto& [value, key] : fields) {
            if (!value->empty()) set_field(cfg, key, *value, "<flags>");
        }
        if (omega_opt->count() > 0) set_field(cfg, "omega", fv.omega.empty() ? "builtin" : fv.omega, "<flags>");
        if (fv.plots) cfg.plots = true;
    } catch (const std::exception& e) {
        std::cerr << "stage=config\nerror=" << e.what() << '\n';
        return kExitConfig;
    }

    if (!fv.batch.empty()) {
        return run_batch(fv.batch, cfg, cfg.output_dir.empty() ? default_output_root() : cfg.output_dir);
    }
    return report_and_exit(run_experiment(cfg), "");
}

}  // namespace lohe::app
