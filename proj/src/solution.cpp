#include "uavmec/solution.hpp"

namespace uavmec {

std::vector<std::vector<int>> served_sets(const Assignment& assoc, int num_uavs) {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(num_uavs));
    for (std::size_t i = 0; i < assoc.size(); ++i) {
        const int c = assoc[i];
        if (c != kLocal && c <= num_uavs) sets[static_cast<std::size_t>(uav_of(c))].push_back(static_cast<int>(i));
    }
    return sets;
}

}  // namespace uavmec
