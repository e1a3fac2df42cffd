#pragma once

#include <optional>

#include "uavmec/geometry.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

// Latency of the single active choice of a UE. `uav` empty means local
// execution (F/f); otherwise upload plus remote compute (D/r + F/f).
// Zero rate or zero capacity gives +infinity.
double combined_latency(const UeProfile& ue, const std::optional<UavPlacement>& uav, double f_hz,
                        double p_w, double alpha, double bandwidth_hz);

// s f^w <= P_max - Q. Equivalent to the battery constraint with the
// propulsion indicator, because an idle UAV trivially satisfies it.
bool uav_battery_ok(double f_sum_hz, double s_coef, double w_exp, double battery_w,
                    double propulsion_w);

// min{((P_max - Q)/s)^(1/w), f_max}: the capacity a served UAV can actually use.
double effective_uav_capacity(const UavProfile& uav);

// min{(P_max/kappa)^(1/nu), f_max}: the fastest a UE may compute locally.
double local_capacity_bound(const UeProfile& ue);

// F/T <= local_capacity_bound: the UE can meet the deadline on its own.
bool locally_feasible(const UeProfile& ue, double latency_s);

}  // namespace uavmec
