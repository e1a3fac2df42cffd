#include "uavmec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <locale>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_codec.hpp"
#include "uavmec/baselines.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/fcm.hpp"
#include "uavmec/feasibility_math.hpp"

namespace uavmec {

namespace {

using detail::json;

const std::map<std::string, Algorithm>& algorithm_names() {
    static const std::map<std::string, Algorithm> m = {
        {"iacl", Algorithm::Iacl},   {"ecc", Algorithm::Ecc},         {"fixed-z", Algorithm::FixedZ},
        {"exh", Algorithm::Exh},     {"fcm-only", Algorithm::FcmOnly},
    };
    return m;
}

const std::map<std::string, SweepAxis>& axis_names() {
    static const std::map<std::string, SweepAxis> m = {
        {"latency", SweepAxis::Latency},
        {"uav_capacity", SweepAxis::UavCapacity},
        {"cpu_cycles", SweepAxis::CpuCycles},
        {"data_size", SweepAxis::DataSize},
    };
    return m;
}

template <typename Map>
std::string key_of(const Map& m, typename Map::mapped_type v) {
    for (const auto& [k, x] : m)
        if (x == v) return k;
    return "?";
}

template <typename Map>
std::string choices(const Map& m) {
    std::string out;
    for (const auto& [k, v] : m) out += (out.empty() ? "" : ", ") + k;
    return out;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys,
               const std::string& source) {
    if (!j.is_object()) throw ParseError(path, source, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
            throw ParseError(path.empty() ? it.key() : path + "." + it.key(), source, "unknown key");
    }
}

template <typename T>
T get(const json& j, const std::string& field, const std::string& source) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ParseError(field, source, "wrong type");
    }
}

double number(const json& j, const std::string& field, const std::string& source) {
    if (!j.is_number()) throw ParseError(field, source, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& field, const std::string& source) {
    if (!j.is_number_integer()) throw ParseError(field, source, "expected an integer");
    return j.get<int>();
}

bool boolean(const json& j, const std::string& field, const std::string& source) {
    if (!j.is_boolean()) throw ParseError(field, source, "expected true or false");
    return j.get<bool>();
}

// Shortest text that reads back to the same double, independent of locale.
std::string num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(std::numeric_limits<double>::max_digits10);
    os << v;
    return os.str();
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
    auto it = algorithm_names().find(name);
    if (it == algorithm_names().end())
        throw ParseError("algorithm", "command line", "'" + name + "' is not one of " + choices(algorithm_names()));
    return it->second;
}

std::string algorithm_name(Algorithm a) { return key_of(algorithm_names(), a); }

SweepAxis parse_axis(const std::string& name) {
    auto it = axis_names().find(name);
    if (it == axis_names().end())
        throw ParseError("axis", "command line", "'" + name + "' is not one of " + choices(axis_names()));
    return it->second;
}

std::string axis_name(SweepAxis a) { return key_of(axis_names(), a); }

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", source + " byte " + std::to_string(e.byte), e.what());
    }
    only_keys(root, "", {"generator", "scenario", "seed", "solver", "sweep"}, source);
    if (root.contains("generator") && root.contains("scenario"))
        throw ParseError("scenario", source, "give either 'generator' or 'scenario', not both");

    ExperimentConfig cfg;
    if (root.contains("seed")) {
        const auto& v = root.at("seed");
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ParseError("seed", source, "expected a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    if (root.contains("generator")) {
        const auto& g = root.at("generator");
        only_keys(g, "generator", {"n_ues", "m_uavs", "field_size_m", "latency_s", "params", "ue", "uav"}, source);
        auto& spec = cfg.generator;
        if (g.contains("n_ues")) spec.n_ues = integer(g.at("n_ues"), "generator.n_ues", source);
        if (g.contains("m_uavs")) spec.m_uavs = integer(g.at("m_uavs"), "generator.m_uavs", source);
        if (g.contains("field_size_m"))
            spec.field_size_m = number(g.at("field_size_m"), "generator.field_size_m", source);
        if (g.contains("latency_s")) spec.latency_s = number(g.at("latency_s"), "generator.latency_s", source);
        try {
            if (g.contains("params")) detail::overlay(g.at("params"), spec.params, "generator.params");
            if (g.contains("ue")) detail::overlay(g.at("ue"), spec.ue_template, "generator.ue");
            if (g.contains("uav")) detail::overlay(g.at("uav"), spec.uav_template, "generator.uav");
        } catch (const ParseError& e) {
            throw ParseError(e.field(), source, e.reason());
        }
        if (spec.n_ues < 1) throw ParseError("generator.n_ues", source, "must be >= 1");
        if (spec.m_uavs < 1) throw ParseError("generator.m_uavs", source, "must be >= 1");
        if (!(spec.field_size_m > 0)) throw ParseError("generator.field_size_m", source, "must be > 0");
        if (!(spec.latency_s > 0)) throw ParseError("generator.latency_s", source, "must be > 0");
    }
    if (root.contains("scenario")) {
        const auto& sc = root.at("scenario");
        if (sc.is_string()) {
            auto path = std::filesystem::path(sc.get<std::string>());
            if (path.is_relative()) path = base_dir / path;
            try {
                cfg.scenario = load_scenario(path);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError("scenario", source, e.what());
            }
        } else {
            try {
                cfg.scenario = detail::scenario_from_json(sc, source + ": scenario");
            } catch (const ParseError& e) {
                throw ParseError("scenario." + e.field(), source, e.reason());
            }
        }
    }
    if (root.contains("solver")) {
        const auto& s = root.at("solver");
        only_keys(s, "solver",
                  {"algorithm", "reps", "max_outer", "tol", "local_search", "merge_uavs", "refine_theta", "jobs"},
                  source);
        auto& r = cfg.run;
        if (s.contains("algorithm")) {
            const auto name = get<std::string>(s.at("algorithm"), "solver.algorithm", source);
            try {
                r.algorithm = parse_algorithm(name);
            } catch (const ParseError& e) {
                throw ParseError("solver.algorithm", source, e.reason());
            }
        }
        if (s.contains("reps")) r.reps = integer(s.at("reps"), "solver.reps", source);
        if (s.contains("max_outer")) r.max_outer = integer(s.at("max_outer"), "solver.max_outer", source);
        if (s.contains("tol")) r.tol = number(s.at("tol"), "solver.tol", source);
        if (s.contains("local_search")) r.local_search = boolean(s.at("local_search"), "solver.local_search", source);
        if (s.contains("merge_uavs")) r.merge_uavs = boolean(s.at("merge_uavs"), "solver.merge_uavs", source);
        if (s.contains("refine_theta")) r.refine_theta = boolean(s.at("refine_theta"), "solver.refine_theta", source);
        if (s.contains("jobs")) r.jobs = integer(s.at("jobs"), "solver.jobs", source);
        if (r.reps < 1) throw ParseError("solver.reps", source, "must be >= 1");
        if (r.jobs < 1) throw ParseError("solver.jobs", source, "must be >= 1");
        if (r.max_outer && *r.max_outer < 1) throw ParseError("solver.max_outer", source, "must be >= 1");
        if (r.tol && !(*r.tol > 0)) throw ParseError("solver.tol", source, "must be > 0");
    }
    if (root.contains("sweep")) {
        const auto& s = root.at("sweep");
        only_keys(s, "sweep", {"axis", "values", "algorithms"}, source);
        auto& w = cfg.sweep;
        if (s.contains("axis")) {
            try {
                w.axis = parse_axis(get<std::string>(s.at("axis"), "sweep.axis", source));
            } catch (const ParseError& e) {
                throw ParseError("sweep.axis", source, e.reason());
            }
        }
        if (s.contains("values")) {
            if (!s.at("values").is_array()) throw ParseError("sweep.values", source, "expected an array");
            for (const auto& v : s.at("values")) w.values.push_back(number(v, "sweep.values", source));
        }
        if (s.contains("algorithms")) {
            if (!s.at("algorithms").is_array())
                throw ParseError("sweep.algorithms", source, "expected an array");
            w.algorithms.clear();
            for (const auto& v : s.at("algorithms")) {
                try {
                    w.algorithms.push_back(parse_algorithm(get<std::string>(v, "sweep.algorithms", source)));
                } catch (const ParseError& e) {
                    throw ParseError("sweep.algorithms", source, e.reason());
                }
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("<file>", path.string(), "cannot open config");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string(), path.parent_path());
}

Scenario make_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.scenario) {
        Scenario s = *cfg.scenario;
        s.params.rng_seed = seed;
        return s;
    }
    GenSpec spec = cfg.generator;
    spec.seed = seed;
    return generate_scenario(spec);
}

void apply_axis(Scenario& s, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::Latency: s.latency_s = value; break;
    case SweepAxis::UavCapacity:
        for (auto& u : s.uavs) u.f_max_hz = value;
        break;
    case SweepAxis::CpuCycles:
        for (auto& u : s.ues) u.cpu_cycles = value;
        break;
    case SweepAxis::DataSize:
        for (auto& u : s.ues) u.data_bits = value;
        break;
    }
    require_valid(s);
}

void apply_axis(GenSpec& spec, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::Latency: spec.latency_s = value; break;
    case SweepAxis::UavCapacity: spec.uav_template.f_max_hz = value; break;
    case SweepAxis::CpuCycles: spec.ue_template.cpu_cycles = value; break;
    case SweepAxis::DataSize: spec.ue_template.data_bits = value; break;
    }
}

SolverOptions solver_options(const Scenario& s, const RunSettings& run) {
    auto o = default_options(s);
    if (run.max_outer) o.max_outer = *run.max_outer;
    if (run.tol) o.tol = *run.tol;
    o.association.local_search = run.local_search;
    o.merge_uavs = run.merge_uavs;
    o.refine_theta = run.refine_theta;
    return o;
}

SolutionReport run_algorithm(const Scenario& s, Algorithm algorithm, const RunSettings& run) {
    if (algorithm == Algorithm::Exh) return exhaustive_solve(s);
    const auto init = bootstrap(s);
    const auto opt = solver_options(s, run);
    switch (algorithm) {
    case Algorithm::Ecc: return ecc_solve(s, init, opt);
    case Algorithm::FixedZ: return fixed_placement_solve(s, init, opt);
    case Algorithm::FcmOnly: {
        SolutionReport rep;
        rep.solution = init;
        rep.objective_w = evaluate_objective(s, init);
        rep.constraints = check_feasibility(s, init);
        rep.trace.push_back({0, rep.objective_w});
        rep.converged = true;
        return rep;
    }
    default: return solve(s, init, opt);
    }
}

int uavs_used(const Solution& sol, int num_uavs) {
    int used = 0;
    for (const auto& set : served_sets(sol.assoc, num_uavs)) used += !set.empty();
    return used;
}

void write_solution_csv(std::ostream& out, const Scenario& s, const SolutionReport& rep) {
    const double alpha = derive_constants(s.params).alpha;
    const auto& sol = rep.solution;
    out << "ue_id,choice,uav_id,f_hz,p_w,latency_s,latency_slack_s\n";
    for (std::size_t i = 0; i < sol.assoc.size(); ++i) {
        const auto& ue = s.ues[i];
        std::optional<UavPlacement> z;
        std::string uav_id;
        if (sol.assoc[i] != kLocal) {
            const int j = uav_of(sol.assoc[i]);
            z = sol.placement[j];
            uav_id = std::to_string(s.uavs[j].id);
        }
        const double lat = combined_latency(ue, z, sol.f_hz[i], sol.p_w[i], alpha, s.params.bandwidth_hz);
        out << ue.id << ',' << sol.assoc[i] << ',' << uav_id << ',' << num(sol.f_hz[i]) << ','
            << num(sol.p_w[i]) << ',' << num(lat) << ',' << num(s.latency_s - lat) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const SolutionReport& rep) {
    out << "t,objective_w\n";
    for (const auto& p : rep.trace) out << p.t << ',' << num(p.objective_w) << '\n';
}

void write_summary_csv(std::ostream& out, const Scenario& s, const SolutionReport& rep,
                       Algorithm algorithm, std::uint64_t seed) {
    const auto& c = rep.counters;
    out << "algorithm,seed,n_ues,m_uavs,objective_w,uavs_used,feasible,converged,outer_iterations,"
           "association_rounds,association_inner,association_accepted,merges_accepted,"
           "capacity_bisections,inverse_bisections,theta_evaluations,placement_accepted,wall_time_s\n";
    out << algorithm_name(algorithm) << ',' << seed << ',' << s.num_ues() << ',' << s.num_uavs() << ','
        << num(rep.objective_w) << ',' << uavs_used(rep.solution, s.num_uavs()) << ','
        << (rep.constraints.feasible() ? 1 : 0) << ',' << (rep.converged ? 1 : 0) << ','
        << c.outer_iterations << ',' << c.association_rounds << ',' << c.association_inner << ','
        << c.association_accepted << ',' << c.merges_accepted << ',' << c.capacity_bisections << ','
        << c.inverse_bisections << ',' << c.theta_evaluations << ',' << c.placement_accepted << ','
        << num(c.wall_time_s) << '\n';
}

void write_run(const std::filesystem::path& dir, const Scenario& s, const SolutionReport& rep,
               Algorithm algorithm, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error("cannot open for writing: " + (dir / name).string());
        return f;
    };
    auto sol = open("solution.csv");
    write_solution_csv(sol, s, rep);
    auto tr = open("trace.csv");
    write_trace_csv(tr, rep);
    auto sum = open("summary.csv");
    write_summary_csv(sum, s, rep, algorithm, seed);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    const auto& w = cfg.sweep;
    if (w.values.empty()) throw ParseError("sweep.values", "sweep", "no values given");
    for (std::size_t k = 1; k < w.values.size(); ++k)
        if (!(w.values[k] > w.values[k - 1]))
            throw ParseError("sweep.values", "sweep", "values must be strictly increasing");
    if (w.algorithms.empty()) throw ParseError("sweep.algorithms", "sweep", "no algorithms given");

    struct Cell {
        std::size_t value, algorithm;
        int rep;
        bool ok = false;
        double objective = 0, used = 0, iterations = 0;
    };
    std::vector<Cell> cells;
    for (std::size_t v = 0; v < w.values.size(); ++v)
        for (std::size_t a = 0; a < w.algorithms.size(); ++a)
            for (int r = 0; r < cfg.run.reps; ++r) cells.push_back({v, a, r});

    // Cells are independent; each worker claims the next index, so results do
    // not depend on the number of workers.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t k; (k = next++) < cells.size();) {
            auto& c = cells[k];
            try {
                Scenario s;
                if (cfg.scenario) {
                    s = make_scenario(cfg, cfg.seed + static_cast<std::uint64_t>(c.rep));
                    apply_axis(s, w.axis, w.values[c.value]);
                } else {
                    ExperimentConfig local = cfg;
                    apply_axis(local.generator, w.axis, w.values[c.value]);
                    s = make_scenario(local, cfg.seed + static_cast<std::uint64_t>(c.rep));
                }
                const auto rep = run_algorithm(s, w.algorithms[c.algorithm], cfg.run);
                c.ok = rep.constraints.feasible();
                c.objective = rep.objective_w;
                c.used = uavs_used(rep.solution, s.num_uavs());
                c.iterations = rep.counters.outer_iterations;
            } catch (const InfeasibleScenario&) {
                c.ok = false;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(cfg.run.jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    for (std::size_t v = 0; v < w.values.size(); ++v) {
        for (std::size_t a = 0; a < w.algorithms.size(); ++a) {
            SweepRow row;
            row.axis = w.axis;
            row.value = w.values[v];
            row.algorithm = w.algorithms[a];
            row.reps = cfg.run.reps;
            row.min_objective_w = std::numeric_limits<double>::infinity();
            row.max_objective_w = -std::numeric_limits<double>::infinity();
            for (const auto& c : cells) {
                if (c.value != v || c.algorithm != a || !c.ok) continue;
                ++row.solved;
                row.mean_objective_w += c.objective;
                row.mean_uavs_used += c.used;
                row.mean_outer_iterations += c.iterations;
                row.min_objective_w = std::min(row.min_objective_w, c.objective);
                row.max_objective_w = std::max(row.max_objective_w, c.objective);
            }
            if (row.solved > 0) {
                row.mean_objective_w /= row.solved;
                row.mean_uavs_used /= row.solved;
                row.mean_outer_iterations /= row.solved;
            } else {
                row.mean_objective_w = row.min_objective_w = row.max_objective_w =
                    std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "axis,value,algorithm,reps,solved,mean_objective_w,min_objective_w,max_objective_w,"
           "mean_uavs_used,mean_outer_iterations\n";
    for (const auto& r : rows) {
        out << axis_name(r.axis) << ',' << num(r.value) << ',' << algorithm_name(r.algorithm) << ','
            << r.reps << ',' << r.solved << ',' << num(r.mean_objective_w) << ','
            << num(r.min_objective_w) << ',' << num(r.max_objective_w) << ',' << num(r.mean_uavs_used)
            << ',' << num(r.mean_outer_iterations) << '\n';
    }
}

}  // namespace uavmec
