#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavmec/orchestrator.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

enum class Algorithm { Iacl, Ecc, FixedZ, Exh, FcmOnly };

// "iacl", "ecc", "fixed-z", "exh", "fcm-only". Throws ParseError otherwise.
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

enum class SweepAxis { Latency, UavCapacity, CpuCycles, DataSize };

// "latency", "uav_capacity", "cpu_cycles", "data_size".
SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis a);

struct RunSettings {
    Algorithm algorithm = Algorithm::Iacl;
    int reps = 1;
    std::optional<int> max_outer;  // default: scenario params
    std::optional<double> tol;
    bool local_search = true;
    bool merge_uavs = true;
    bool refine_theta = false;
    int jobs = 1;  // sweep worker threads
};

struct SweepSettings {
    SweepAxis axis = SweepAxis::Latency;
    std::vector<double> values;
    std::vector<Algorithm> algorithms{Algorithm::Iacl};
};

// Either a generator (re-seeded per run) or a fixed scenario file.
struct ExperimentConfig {
    GenSpec generator;
    std::optional<Scenario> scenario;
    std::uint64_t seed = 0;
    RunSettings run;
    SweepSettings sweep;
};

// JSON config: optional "generator" {n_ues, m_uavs, field_size_m, latency_s,
// params{}, ue{}, uav{}}, or "scenario" (file path relative to the config, or
// an inline scenario object), plus optional "seed", "solver" and "sweep"
// sections. Unknown keys raise ParseError naming the key.
ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// The scenario for one seed: generated, or the fixed scenario with its RNG seed set.
Scenario make_scenario(const ExperimentConfig& config, std::uint64_t seed);

// Moves every UE (or UAV) of the scenario to the sweep value.
void apply_axis(Scenario& scenario, SweepAxis axis, double value);
void apply_axis(GenSpec& spec, SweepAxis axis, double value);

SolverOptions solver_options(const Scenario& scenario, const RunSettings& run);

// Bootstrap plus the chosen algorithm. fcm-only reports the bootstrap itself.
SolutionReport run_algorithm(const Scenario& scenario, Algorithm algorithm, const RunSettings& run);

int uavs_used(const Solution& solution, int num_uavs);

// CSV writers; column layouts are fixed and listed in the README.
void write_solution_csv(std::ostream& out, const Scenario& scenario, const SolutionReport& report);
void write_trace_csv(std::ostream& out, const SolutionReport& report);
void write_summary_csv(std::ostream& out, const Scenario& scenario, const SolutionReport& report,
                       Algorithm algorithm, std::uint64_t seed);

// Writes solution.csv, trace.csv and summary.csv into dir (created if needed).
void write_run(const std::filesystem::path& dir, const Scenario& scenario,
               const SolutionReport& report, Algorithm algorithm, std::uint64_t seed);

struct SweepRow {
    SweepAxis axis = SweepAxis::Latency;
    double value = 0.0;
    Algorithm algorithm = Algorithm::Iacl;
    int reps = 0;
    int solved = 0;  // reps whose bootstrap and solve succeeded
    double mean_objective_w = 0.0;
    double min_objective_w = 0.0;
    double max_objective_w = 0.0;
    double mean_uavs_used = 0.0;
    double mean_outer_iterations = 0.0;
};

// One row per (value, algorithm), values in the given order. Rep r uses seed
// config.seed + r for every value and algorithm. Throws ParseError when the
// values are not strictly increasing.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace uavmec
