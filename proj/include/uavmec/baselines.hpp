#pragma once

#include <cstdint>
#include <vector>

#include "uavmec/capacity.hpp"
#include "uavmec/orchestrator.hpp"

namespace uavmec {

// The main loop with the capacity step replaced by an equal split (ECC).
SolutionReport ecc_solve(const Scenario& scenario, const Solution& initial,
                         SolverOptions options);

// The main loop with placement frozen at the initial solution's placement.
SolutionReport fixed_placement_solve(const Scenario& scenario, const Solution& initial,
                                     SolverOptions options);

struct ExhaustiveLimits {
    int n_max = 6;
    int m_max = 2;
    int theta_points = 31;   // beamwidth grid per served set before refinement
    int block_rounds = 60;   // capacity/placement alternations per beamwidth
};

// Enumerates every association; each served set gets its own best placement
// and capacity split. Throws ScaleExceeded above the limits and
// InfeasibleScenario when no assignment is feasible.
SolutionReport exhaustive_solve(const Scenario& scenario, const ExhaustiveLimits& limits = {});

// Best of `starts` runs of bootstrap + solve, each with a different FCM seed.
SolutionReport multistart_solve(const Scenario& scenario, int starts, const SolverOptions& options);

// Brute-force capacity split for at most three UEs: a grid over the box and
// budget simplex, then `refinements` zoomed passes around the incumbent.
// Throws ScaleExceeded above three UEs and CapacityInfeasible when the
// minimum capacities already exceed the cap.
std::vector<double> capacity_grid_oracle(const CapacitySubproblem& sub, int grid_points,
                                         int refinements = 2);

}  // namespace uavmec
