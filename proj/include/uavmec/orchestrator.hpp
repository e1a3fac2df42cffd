#pragma once

#include <vector>

#include "uavmec/association.hpp"
#include "uavmec/objective.hpp"
#include "uavmec/scenario.hpp"
#include "uavmec/solution.hpp"

namespace uavmec {

enum class CapacityRule {
    Optimal,     // per-UAV KKT allocation, accepted only if it does not raise the objective
    EqualSplit,  // ECC baseline: equal shares, applied unconditionally
};

struct SolverOptions {
    int max_outer = 50;
    double tol = 1e-3;
    AssociationOptions association;
    CapacityRule capacity = CapacityRule::Optimal;
    bool optimize_placement = true;
    bool refine_theta = false;
    // After association, try handing one UAV's whole served set to another
    // UAV re-placed for the union; kept only when the objective drops.
    bool merge_uavs = true;
};

// Options seeded from the scenario's outer_max_iter / outer_tol.
SolverOptions default_options(const Scenario& scenario);

struct SolverCounters {
    int outer_iterations = 0;
    int association_rounds = 0;
    long association_inner = 0;
    int association_accepted = 0;
    long capacity_bisections = 0;
    long inverse_bisections = 0;
    long theta_evaluations = 0;
    int placement_accepted = 0;
    int merges_accepted = 0;
    double wall_time_s = 0.0;
};

struct TracePoint {
    int t = 0;
    double objective_w = 0.0;
};

struct SolutionReport {
    Solution solution;
    double objective_w = 0.0;
    ConstraintReport constraints;
    std::vector<TracePoint> trace;  // t = 0 is the initial solution
    SolverCounters counters;
    bool converged = false;
};

// Equal split of the cap, floored at f_min, with the excess above f_min shrunk
// proportionally when the floors push the sum over the cap.
std::vector<double> equal_split(const std::vector<double>& f_min, double cap);

// Association (plus merges), capacity, placement, power; repeated until the relative change
// of the objective drops below tol or max_outer rounds have run. Throws
// SolverAssertion when the initial solution is infeasible or a sub-step
// fails in a way the safeguards should have prevented.
SolutionReport solve(const Scenario& scenario, const Solution& initial,
                     const SolverOptions& options);

}  // namespace uavmec
