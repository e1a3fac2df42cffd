#pragma once

#include <cstdint>
#include <vector>

#include "uavmec/scenario.hpp"
#include "uavmec/solution.hpp"

namespace uavmec {

// N0: UEs that can meet the deadline on their own CPU; N1: everyone else.
struct LocalSplit {
    std::vector<int> local;
    std::vector<int> offload;
};

LocalSplit classify_local_set(const Scenario& scenario);

struct FcmState {
    std::vector<std::vector<double>> membership;  // [point][cluster], rows sum to 1
    std::vector<Vec2> centroids;
    double exponent = 2.0;
    int iterations = 0;
    std::vector<double> objective_trace;  // after every half-step
};

// sum_i sum_j a_ij^m ((X_j - x_i)^2 + (Y_j - y_i)^2 + H_j^2)
double fcm_objective(const std::vector<Vec2>& points, const std::vector<double>& h_min,
                     const FcmState& state);

// Alternating membership / centroid updates from k-means++ seeds until the
// objective changes by less than tol (relative) or max_iter rounds.
FcmState fcm_iterate(const std::vector<Vec2>& points, const std::vector<double>& h_min,
                     double exponent, std::uint64_t seed, int max_iter = 500, double tol = 1e-8);

// Initial feasible solution: N0 local, N1 admitted greedily by membership to
// UAVs hovering at their cluster centroids with minimum altitude and
// beamwidth. Throws InfeasibleScenario naming every UE admitted nowhere.
Solution bootstrap(const Scenario& scenario);
Solution bootstrap(const Scenario& scenario, std::uint64_t seed);

}  // namespace uavmec
