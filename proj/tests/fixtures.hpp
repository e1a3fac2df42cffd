#pragma once

// Scenario builders shared by the solver-level tests.

#include <cstdint>

#include "uavmec/scenario.hpp"

namespace fixture {

// UEs too slow to meet the deadline on their own, packed into a small field
// so the bootstrap can admit them; every solver step has real work to do.
inline uavmec::Scenario offload(int n, int m, double field_m, std::uint64_t seed) {
    uavmec::GenSpec g;
    g.n_ues = n;
    g.m_uavs = m;
    g.field_size_m = field_m;
    g.seed = seed;
    g.ue_template.f_max_hz = 5e6;
    return uavmec::generate_scenario(g);
}

// Defaults: every UE can run locally.
inline uavmec::Scenario defaults(int n, int m, std::uint64_t seed) {
    uavmec::GenSpec g;
    g.n_ues = n;
    g.m_uavs = m;
    g.seed = seed;
    return uavmec::generate_scenario(g);
}

}  // namespace fixture
