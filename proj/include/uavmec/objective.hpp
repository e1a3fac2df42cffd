#pragma once

#include <map>
#include <string>
#include <vector>

#include "uavmec/scenario.hpp"
#include "uavmec/solution.hpp"

namespace uavmec {

// W1 (sum of offload powers + sum of local execution powers)
//   + W2 sum_j [s_j (sum_i f_ij)^w_j + Q_j 1{UAV j serves someone}].
// The propulsion indicator is exact, never the reweighted surrogate.
double evaluate_objective(const Scenario& scenario, const Solution& solution);

// Constraint keys used in ConstraintReport::max_violation.
inline constexpr const char* kLatency = "latency";
inline constexpr const char* kUePower = "ue_power";
inline constexpr const char* kUeCapacity = "ue_capacity";
inline constexpr const char* kUavBattery = "uav_battery";
inline constexpr const char* kUavCapacity = "uav_capacity";
inline constexpr const char* kUserCount = "user_count";
inline constexpr const char* kCoverage = "coverage";
inline constexpr const char* kAltitudeBox = "altitude_box";
inline constexpr const char* kBeamwidthBox = "beamwidth_box";
inline constexpr const char* kStructure = "structure";

// Largest excess per constraint family, relative to the bound it violates
// (absolute for user counts and structure). Values <= 0 are slack.
struct ConstraintReport {
    std::map<std::string, double> max_violation;
    std::vector<double> ue_latency_excess;  // (latency - T) / T per UE

    bool feasible(double tol = 1e-9) const;
    std::string describe() const;  // the violated families, for error messages
};

ConstraintReport check_feasibility(const Scenario& scenario, const Solution& solution);

}  // namespace uavmec
