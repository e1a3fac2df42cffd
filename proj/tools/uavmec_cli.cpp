// Command-line front end: generate scenarios, run one solver, or sweep a
// parameter. Exit codes: 0 ok, 1 bad config or arguments, 2 scale limit or
// infeasible instance, 3 internal solver failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavmec/errors.hpp"
#include "uavmec/experiment.hpp"

namespace fs = std::filesystem;
using namespace uavmec;

namespace {

enum Exit { kOk = 0, kConfig = 1, kInfeasible = 2, kInternal = 3 };

struct Common {
    std::string config;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string algorithm;
    std::optional<int> reps;
    std::optional<int> tmax;
    std::optional<double> eps;
    std::optional<int> jobs;
    bool pure = false;
};

// --out wins, then UAVMEC_OUT_DIR, then ./out.
fs::path out_dir(const Common& c) {
    if (!c.out.empty()) return c.out;
    if (const char* env = std::getenv("UAVMEC_OUT_DIR"); env && *env) return env;
    return "out";
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    if (!c.scenario.empty()) cfg.scenario = load_scenario(c.scenario);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.algorithm.empty()) cfg.run.algorithm = parse_algorithm(c.algorithm);
    if (c.reps) cfg.run.reps = *c.reps;
    if (c.tmax) cfg.run.max_outer = *c.tmax;
    if (c.eps) cfg.run.tol = *c.eps;
    if (c.jobs) cfg.run.jobs = *c.jobs;
    if (c.pure) cfg.run.local_search = cfg.run.merge_uavs = false;
    if (cfg.run.reps < 1) throw ParseError("reps", "command line", "must be >= 1");
    if (cfg.run.jobs < 1) throw ParseError("jobs", "command line", "must be >= 1");
    if (cfg.run.max_outer && *cfg.run.max_outer < 1) throw ParseError("tmax", "command line", "must be >= 1");
    if (cfg.run.tol && !(*cfg.run.tol > 0)) throw ParseError("eps", "command line", "must be > 0");
    return cfg;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("values", "command line", "'" + item + "' is not a number");
        }
    }
    return out;
}

int run_generate(const Common& c) {
    const auto cfg = resolve(c);
    const auto dir = out_dir(c);
    fs::create_directories(dir);
    const auto s = make_scenario(cfg, cfg.seed);
    save_scenario(s, dir / "scenario.json");
    std::cout << "wrote " << (dir / "scenario.json").string() << " (" << s.num_ues() << " UEs, "
              << s.num_uavs() << " UAVs)\n";
    return kOk;
}

int run_solve(const Common& c) {
    const auto cfg = resolve(c);
    const auto dir = out_dir(c);
    const int reps = cfg.run.reps;
    for (int r = 0; r < reps; ++r) {
        const auto seed = cfg.seed + static_cast<std::uint64_t>(r);
        const auto s = make_scenario(cfg, seed);
        const auto rep = run_algorithm(s, cfg.run.algorithm, cfg.run);
        const auto target = reps == 1 ? dir : dir / ("seed_" + std::to_string(seed));
        write_run(target, s, rep, cfg.run.algorithm, seed);
        std::cout << algorithm_name(cfg.run.algorithm) << " seed " << seed << ": objective "
                  << rep.objective_w << " W, " << uavs_used(rep.solution, s.num_uavs()) << " UAV(s), "
                  << rep.counters.outer_iterations << " outer iteration(s) -> " << target.string() << '\n';
        if (!rep.constraints.feasible()) {
            std::cerr << "error: solution violates " << rep.constraints.describe() << '\n';
            return kInternal;
        }
    }
    return kOk;
}

int run_sweep_cmd(const Common& c, const std::string& axis, const std::string& values,
                  const std::vector<std::string>& algorithms) {
    auto cfg = resolve(c);
    if (!axis.empty()) cfg.sweep.axis = parse_axis(axis);
    if (!values.empty()) cfg.sweep.values = parse_values(values);
    if (!algorithms.empty()) {
        cfg.sweep.algorithms.clear();
        for (const auto& a : algorithms) cfg.sweep.algorithms.push_back(parse_algorithm(a));
    } else if (!c.algorithm.empty()) {
        cfg.sweep.algorithms = {cfg.run.algorithm};
    }
    const auto rows = run_sweep(cfg);
    const auto dir = out_dir(c);
    fs::create_directories(dir);
    std::ofstream f(dir / "sweep.csv", std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + (dir / "sweep.csv").string());
    write_sweep_csv(f, rows);
    write_sweep_csv(std::cout, rows);
    return kOk;
}

void add_common(CLI::App* app, Common& c, bool solver_flags) {
    app->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--scenario", c.scenario, "scenario file (replaces the config's generator)")
        ->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "base seed (rep r uses seed + r)");
    app->add_option("--out", c.out, "output directory (default: $UAVMEC_OUT_DIR or ./out)");
    if (!solver_flags) return;
    app->add_option("--algorithm", c.algorithm, "iacl | ecc | fixed-z | exh | fcm-only");
    app->add_option("--reps", c.reps, "number of seeds");
    app->add_option("--tmax", c.tmax, "outer iteration limit");
    app->add_option("--eps", c.eps, "relative convergence tolerance");
    app->add_option("--jobs", c.jobs, "worker threads for sweeps");
    app->add_flag("--pure", c.pure, "plain alternation: no association local search, no UAV merges");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-UAV edge computing: association, power, capacity and placement solver"};
    app.require_subcommand(1);

    Common gen, sol, swp;
    std::string axis, values;
    std::vector<std::string> algorithms;
    auto* g = app.add_subcommand("generate", "write a seeded scenario to <out>/scenario.json");
    add_common(g, gen, false);
    auto* s = app.add_subcommand("solve", "run one algorithm; writes solution.csv, trace.csv, summary.csv");
    add_common(s, sol, true);
    auto* w = app.add_subcommand("sweep", "mean objective over seeds for each value of one parameter");
    add_common(w, swp, true);
    w->add_option("--axis", axis, "latency | uav_capacity | cpu_cycles | data_size");
    w->add_option("--values", values, "comma-separated, strictly increasing");
    w->add_option("--algorithms", algorithms, "algorithms to compare")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        if (*g) return run_generate(gen);
        if (*s) return run_solve(sol);
        return run_sweep_cmd(swp, axis, values, algorithms);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const InvalidScenario& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ScaleExceeded& e) {
        std::cerr << "scale limit: " << e.what() << '\n';
        return kInfeasible;
    } catch (const InfeasibleScenario& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NoFeasibleChoice& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
