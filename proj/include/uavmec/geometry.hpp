#pragma once

#include <vector>

#include "uavmec/scenario.hpp"

namespace uavmec {

// Decision for one UAV: horizontal position, altitude, antenna half-beamwidth.
struct UavPlacement {
    double x_m = 0.0;
    double y_m = 0.0;
    double h_m = 0.0;
    double theta_rad = 0.0;

    Vec2 xy() const { return {x_m, y_m}; }
    friend bool operator==(const UavPlacement&, const UavPlacement&) = default;
};

using Placement = std::vector<UavPlacement>;

double horizontal_distance(Vec2 ue, Vec2 uav);

// Directional antenna pattern: G0/theta_j^2 inside the beam (boundary
// inclusive), sidelobe gain 0 outside.
double antenna_gain(double theta_off_axis, double phi_off_axis, double theta_j,
                    double antenna_const = 2.2846);

// Line-of-sight power gain g0 / (H^2 + R^2). Diagnostics only; the rate uses
// the folded constant alpha.
double channel_gain(double ref_channel_gain, double h_m, double r_horiz_m);

// B * log2(1 + alpha p / (theta^2 (H^2 + R^2))), bits/s.
double uplink_rate(double p_w, double theta_j, double h_m, double r_horiz_m, double alpha,
                   double bandwidth_hz);

// R <= H tan(theta), boundary inclusive.
bool is_covered(double r_horiz_m, double h_m, double theta_j);

// theta^2 (H^2 + R^2) / alpha: the power-normalised path term shared by the
// rate, optimal power, and capacity subproblems.
double path_factor(double theta_j, double h_m, double r_horiz_m, double alpha);

// Placement invariants for one UAV profile (box bounds on H and theta).
bool within_bounds(const UavPlacement& z, const UavProfile& uav);

}  // namespace uavmec
