#pragma once

#include "uavmec/geometry.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

// Spectral load D f / (B (T f - F)): the bits/s/Hz an upload must reach so
// that upload plus remote compute take exactly T. Requires T f > F.
double required_spectral_efficiency(double data_bits, double cpu_cycles, double f_hz,
                                    double latency_s, double bandwidth_hz);

// (2^x - 1) / alpha with x the required spectral efficiency. Multiplying by
// theta^2 (H^2 + R^2) gives the optimal transmit power.
double power_coefficient(const UeProfile& ue, double f_hz, double latency_s, double alpha,
                         double bandwidth_hz);

// Smallest transmit power meeting the deadline with equality at capacity f.
// Throws InfeasibleDeadline when T f <= F. The UE power cap is not applied
// here; callers keep f >= f_min so that the result never exceeds it.
double optimal_uplink_power(const UeProfile& ue, const UavPlacement& uav, double f_hz,
                            double latency_s, double alpha, double bandwidth_hz);

// kappa f^nu.
double local_exec_power(const UeProfile& ue, double f_hz);

}  // namespace uavmec
