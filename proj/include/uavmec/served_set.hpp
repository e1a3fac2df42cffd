#pragma once

#include <limits>
#include <vector>

#include "uavmec/geometry.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

struct ServedSetOptions {
    std::vector<double> thetas;  // beamwidths to try
    bool polish = false;         // Brent search between the best grid point's neighbours
    int block_rounds = 60;       // capacity/placement alternations per beamwidth
};

// One UAV's placement, capacity split and closed-form powers for a fixed served set.
struct ServedSetPlan {
    double cost = std::numeric_limits<double>::infinity();  // W1 sum p + W2 (s (sum f)^w + Q)
    UavPlacement z;
    std::vector<double> f_hz;  // aligned with the members passed in
    std::vector<double> p_w;

    bool feasible() const { return cost < std::numeric_limits<double>::infinity(); }
};

// For each beamwidth, starts from the placement that covers the set best and
// alternates the optimal split with the optimal fixed-beamwidth placement;
// both half-steps only lower the cost. Returns the best plan over all
// beamwidths, or an infeasible plan when nothing covers the set within the
// UAV's limits.
ServedSetPlan plan_served_set(const Scenario& scenario, int uav, const std::vector<int>& members,
                              const ServedSetOptions& options);

}  // namespace uavmec
