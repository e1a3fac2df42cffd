#pragma once

#include <vector>

#include "uavmec/geometry.hpp"

namespace uavmec {

// Association choice per UE: 0 = local execution, j >= 1 = offload to
// scenario.uavs[j - 1].
inline constexpr int kLocal = 0;

using Assignment = std::vector<int>;

inline constexpr int uav_of(int choice) { return choice - 1; }
inline constexpr int choice_of(int uav_index) { return uav_index + 1; }

// Full decision (A, F, P, Z). f_hz[i] is the capacity of UE i's active
// choice (its own CPU when local); p_w[i] is its transmit power, 0 when local.
struct Solution {
    Assignment assoc;
    std::vector<double> f_hz;
    std::vector<double> p_w;
    Placement placement;

    friend bool operator==(const Solution&, const Solution&) = default;
};

// Per-UAV served sets (indices into scenario.ues), in ascending UE order.
std::vector<std::vector<int>> served_sets(const Assignment& assoc, int num_uavs);

}  // namespace uavmec
