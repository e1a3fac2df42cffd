#pragma once

#include <optional>
#include <vector>

#include "uavmec/geometry.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

// Placement of one UAV for a fixed served set. With closed-form powers the
// served UEs transmit L_i theta^2 (H^2 + R_i^2), so the UAV minimises
// theta^2 sum_i L_i (H^2 + R_i^2) subject to covering every served UE.
struct PlacementSubproblem {
    std::vector<Vec2> ue_pos;
    std::vector<double> weight;       // L_i >= 0
    // Optional per-UE bound on theta^2 (H^2 + R_i^2), i.e. P_max / L_i; keeps
    // the recomputed powers under the UE power cap. Empty means unbounded.
    std::vector<double> path_budget;
    double h_min_m = 10.0;
    double h_max_m = 50.0;
    double theta_min_rad = 0.0;
    double theta_max_rad = 0.0;
    double theta_step_rad = 0.0;
    bool refine_theta = false;  // golden-section polish around the best grid point
};

PlacementSubproblem make_placement_subproblem(const UavProfile& uav, double theta_step_rad);

double placement_objective(double x_m, double y_m, double h_m, double theta_rad,
                           const PlacementSubproblem& sub);
double placement_objective(const UavPlacement& z, const PlacementSubproblem& sub);

// Best (X, Y, H) for a fixed theta, or nullopt when no point covers every UE
// within the altitude box and power budgets.
std::optional<UavPlacement> try_fixed_beamwidth(const PlacementSubproblem& sub, double theta_rad);

// Same, throwing PlacementInfeasible.
UavPlacement solve_fixed_beamwidth(const PlacementSubproblem& sub, double theta_rad);

struct ThetaSample {
    double theta_rad = 0.0;
    double objective = 0.0;  // +inf when infeasible at this theta
};

struct PlacementResult {
    UavPlacement z;
    double objective = 0.0;
    std::vector<ThetaSample> samples;
};

// theta_min, theta_min + xi, ..., theta_max (the last point is always theta_max).
std::vector<double> theta_grid(double theta_min, double theta_max, double step);

// One-dimensional search over the theta grid; throws AllInfeasible when no
// grid point admits coverage.
PlacementResult optimize_placement(const PlacementSubproblem& sub);

}  // namespace uavmec
