#pragma once

#include <vector>

#include "uavmec/geometry.hpp"
#include "uavmec/scenario.hpp"

namespace uavmec {

// One served UE inside a per-UAV capacity problem.
struct CapacityTerm {
    double path = 0.0;        // G_ij = theta^2 (H^2 + R^2) / alpha
    double data_bits = 0.0;
    double cpu_cycles = 0.0;
    double f_min_hz = 0.0;    // deadline reachable at max UE power
};

// minimise W1 sum_i G_i (2^{D f_i / (B (T f_i - F_i))} - 1) + W2 s (sum f)^w
// subject to sum f <= f_cap and f_i >= f_min_i.
struct CapacitySubproblem {
    std::vector<CapacityTerm> terms;
    double latency_s = 1.0;
    double bandwidth_hz = 1e6;
    double f_cap_hz = 0.0;  // battery-reduced cap of the UAV
    double weight_ue = 1.0;
    double weight_uav = 1.0;
    double s_coef = 0.0;
    double w_exp = 3.0;
    double eps_inverse = 1e-10;     // relative, per inverse evaluation
    double eps_multiplier = 1e-8;   // relative, outer bisection
};

struct CapacityResult {
    std::vector<double> f_hz;
    bool cap_binding = false;  // sum f = f_cap with a positive multiplier
    double cap_multiplier = 0.0;
    double total_hz = 0.0;     // sum f (nu in the unconstrained case)
    int outer_iterations = 0;
    long inverse_iterations = 0;
};

// F / (T - D / (B log2(1 + P_max / G))). Throws DeadlineUnreachable when the
// upload at full power already uses the whole deadline.
double min_offload_capacity(const UeProfile& ue, const UavPlacement& uav, double latency_s,
                            double alpha, double bandwidth_hz);
double min_offload_capacity(double path, double data_bits, double cpu_cycles, double p_max_w,
                            double latency_s, double bandwidth_hz);

// Derivative of the transmit-power term w.r.t. f: strictly increasing from
// -inf at f = F/T to 0 as f -> inf.
double marginal_cost_h(double f_hz, const CapacityTerm& term, double latency_s,
                       double bandwidth_hz, double weight_ue);

// Bisection inverse of marginal_cost_h on [lo, hi]. Throws BracketError if
// target lies outside [h(lo), h(hi)]. Result is within eps * hi of the root.
double invert_h(double target, const CapacityTerm& term, double latency_s, double bandwidth_hz,
                double weight_ue, double lo, double hi, double eps, long* iterations = nullptr);

// max{h^-1(target), f_min}, bracketing automatically.
double clamped_inverse(double target, const CapacityTerm& term, double latency_s,
                       double bandwidth_hz, double weight_ue, double eps,
                       long* iterations = nullptr);

double capacity_objective(const CapacitySubproblem& sub, const std::vector<double>& f_hz);

// Optimal split via the KKT case analysis with nested bisection. Throws
// CapacityInfeasible when sum f_min exceeds the cap.
CapacityResult allocate_capacity_uav(const CapacitySubproblem& sub);

// F/T; throws LocalInfeasible if that exceeds the local capacity bound.
double allocate_local(const UeProfile& ue, double latency_s);

}  // namespace uavmec
