#include "uavmec/feasibility_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavmec {

double combined_latency(const UeProfile& ue, const std::optional<UavPlacement>& uav, double f_hz,
                        double p_w, double alpha, double bandwidth_hz) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!(f_hz > 0.0)) return inf;
    const double compute = ue.cpu_cycles / f_hz;
    if (!uav) return compute;
    const double r = horizontal_distance(ue.pos, uav->xy());
    const double rate = uplink_rate(p_w, uav->theta_rad, uav->h_m, r, alpha, bandwidth_hz);
    if (!(rate > 0.0)) return inf;
    return ue.data_bits / rate + compute;
}

bool uav_battery_ok(double f_sum_hz, double s_coef, double w_exp, double battery_w,
                    double propulsion_w) {
    return s_coef * std::pow(f_sum_hz, w_exp) <= battery_w - propulsion_w;
}

double effective_uav_capacity(const UavProfile& uav) {
    const double battery_cap = std::pow((uav.battery_w - uav.propulsion_w) / uav.s_coef, 1.0 / uav.w_exp);
    return std::min(battery_cap, uav.f_max_hz);
}

double local_capacity_bound(const UeProfile& ue) {
    if (ue.kappa <= 0.0) return ue.f_max_hz;
    return std::min(std::pow(ue.p_max_w / ue.kappa, 1.0 / ue.nu), ue.f_max_hz);
}

bool locally_feasible(const UeProfile& ue, double latency_s) {
    return ue.cpu_cycles / latency_s <= local_capacity_bound(ue);
}

}  // namespace uavmec
