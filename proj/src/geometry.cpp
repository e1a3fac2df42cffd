#include "uavmec/geometry.hpp"

#include <cmath>

namespace uavmec {

double horizontal_distance(Vec2 ue, Vec2 uav) { return std::hypot(uav.x - ue.x, uav.y - ue.y); }

double antenna_gain(double theta_off_axis, double phi_off_axis, double theta_j,
                    double antenna_const) {
    if (theta_off_axis <= theta_j && phi_off_axis <= theta_j) return antenna_const / (theta_j * theta_j);
    return 0.0;
}

double channel_gain(double ref_channel_gain, double h_m, double r_horiz_m) {
    return ref_channel_gain / (h_m * h_m + r_horiz_m * r_horiz_m);
}

double uplink_rate(double p_w, double theta_j, double h_m, double r_horiz_m, double alpha,
                   double bandwidth_hz) {
    if (p_w <= 0.0) return 0.0;
    const double snr = alpha * p_w / (theta_j * theta_j * (h_m * h_m + r_horiz_m * r_horiz_m));
    return bandwidth_hz * std::log1p(snr) / std::numbers::ln2;
}

bool is_covered(double r_horiz_m, double h_m, double theta_j) {
    // tan(pi/4) rounds below 1; a few ulps of slack keep the boundary inclusive.
    return r_horiz_m <= h_m * std::tan(theta_j) * (1.0 + 1e-12);
}

double path_factor(double theta_j, double h_m, double r_horiz_m, double alpha) {
    return theta_j * theta_j * (h_m * h_m + r_horiz_m * r_horiz_m) / alpha;
}

bool within_bounds(const UavPlacement& z, const UavProfile& uav) {
    return z.h_m >= uav.h_min_m && z.h_m <= uav.h_max_m && z.theta_rad >= uav.theta_min_rad &&
           z.theta_rad <= uav.theta_max_rad;
}

}  // namespace uavmec
