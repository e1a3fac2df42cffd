#include "uavmec/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "uavmec/feasibility_math.hpp"
#include "uavmec/power.hpp"

namespace uavmec {

double evaluate_objective(const Scenario& scenario, const Solution& solution) {
    const auto& prm = scenario.params;
    std::vector<double> load(scenario.uavs.size(), 0.0);
    std::vector<bool> served(scenario.uavs.size(), false);
    double ue_power = 0.0;
    for (std::size_t i = 0; i < scenario.ues.size(); ++i) {
        const int c = solution.assoc[i];
        if (c == kLocal) {
            ue_power += local_exec_power(scenario.ues[i], solution.f_hz[i]);
        } else {
            ue_power += solution.p_w[i];
            load[uav_of(c)] += solution.f_hz[i];
            served[uav_of(c)] = true;
        }
    }
    double uav_power = 0.0;
    for (std::size_t j = 0; j < scenario.uavs.size(); ++j) {
        if (!served[j]) continue;
        const auto& u = scenario.uavs[j];
        uav_power += u.s_coef * std::pow(load[j], u.w_exp) + u.propulsion_w;
    }
    return prm.weight_ue * ue_power + prm.weight_uav * uav_power;
}

bool ConstraintReport::feasible(double tol) const {
    return std::all_of(max_violation.begin(), max_violation.end(),
                       [tol](const auto& kv) { return kv.second <= tol; });
}

std::string ConstraintReport::describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, v] : max_violation) {
        if (v <= 1e-9) continue;
        os << (first ? "" : ", ") << key << " +" << v;
        first = false;
    }
    return first ? "feasible" : os.str();
}

ConstraintReport check_feasibility(const Scenario& scenario, const Solution& sol) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    ConstraintReport rep;
    for (const char* key : {kLatency, kUePower, kUeCapacity, kUavBattery, kUavCapacity, kUserCount,
                            kCoverage, kAltitudeBox, kBeamwidthBox, kStructure})
        rep.max_violation[key] = kNegInf;
    auto raise = [&](const char* key, double v) {
        auto& slot = rep.max_violation[key];
        slot = std::max(slot, std::isnan(v) ? std::numeric_limits<double>::infinity() : v);
    };

    const std::size_t n = scenario.ues.size();
    const std::size_t m = scenario.uavs.size();
    if (sol.assoc.size() != n || sol.f_hz.size() != n || sol.p_w.size() != n ||
        sol.placement.size() != m) {
        raise(kStructure, 1.0);
        return rep;
    }
    raise(kStructure, 0.0);

    const auto dc = derive_constants(scenario.params);
    const double T = scenario.latency_s;
    const double B = scenario.params.bandwidth_hz;
    std::vector<double> load(m, 0.0);
    std::vector<int> count(m, 0);
    rep.ue_latency_excess.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& ue = scenario.ues[i];
        const int c = sol.assoc[i];
        if (c < 0 || c > static_cast<int>(m)) {
            raise(kStructure, 1.0);
            rep.ue_latency_excess[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        std::optional<UavPlacement> z;
        if (c == kLocal) {
            raise(kUeCapacity, (sol.f_hz[i] - ue.f_max_hz) / ue.f_max_hz);
            raise(kUePower, (local_exec_power(ue, sol.f_hz[i]) - ue.p_max_w) / ue.p_max_w);
        } else {
            const int j = uav_of(c);
            z = sol.placement[j];
            load[j] += sol.f_hz[i];
            ++count[j];
            raise(kUePower, (sol.p_w[i] - ue.p_max_w) / ue.p_max_w);
            const double reach = z->h_m * std::tan(z->theta_rad);
            const double r = horizontal_distance(ue.pos, z->xy());
            raise(kCoverage, is_covered(r, z->h_m, z->theta_rad) ? std::min(0.0, (r - reach) / reach)
                                                                 : (r - reach) / reach);
        }
        if (sol.f_hz[i] < 0.0 || sol.p_w[i] < 0.0) raise(kStructure, 1.0);
        const double lat = combined_latency(ue, z, sol.f_hz[i], sol.p_w[i], dc.alpha, B);
        rep.ue_latency_excess[i] = (lat - T) / T;
        raise(kLatency, rep.ue_latency_excess[i]);
    }

    for (std::size_t j = 0; j < m; ++j) {
        const auto& u = scenario.uavs[j];
        const auto& z = sol.placement[j];
        raise(kAltitudeBox, std::max(u.h_min_m - z.h_m, z.h_m - u.h_max_m) / u.h_max_m);
        raise(kBeamwidthBox,
              std::max(u.theta_min_rad - z.theta_rad, z.theta_rad - u.theta_max_rad) / u.theta_max_rad);
        raise(kUavCapacity, (load[j] - u.f_max_hz) / u.f_max_hz);
        raise(kUserCount, static_cast<double>(count[j] - u.max_users));
        const double used = count[j] > 0 ? u.s_coef * std::pow(load[j], u.w_exp) + u.propulsion_w : 0.0;
        raise(kUavBattery, (used - u.battery_w) / u.battery_w);
    }
    return rep;
}

}  // namespace uavmec
