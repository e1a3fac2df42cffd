#include "uavmec/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"

namespace uavmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisection = 400;

}  // namespace

double min_offload_capacity(double path, double data_bits, double cpu_cycles, double p_max_w,
                            double latency_s, double bandwidth_hz) {
    const double spectral = std::log1p(p_max_w / path) / std::numbers::ln2;
    const double upload_s = data_bits / (bandwidth_hz * spectral);
    const double compute_s = latency_s - upload_s;
    if (!(compute_s > 0.0)) {
        std::ostringstream os;
        os << "upload at max power takes " << upload_s << " s, deadline is " << latency_s << " s";
        throw DeadlineUnreachable(os.str());
    }
    return cpu_cycles / compute_s;
}

double min_offload_capacity(const UeProfile& ue, const UavPlacement& uav, double latency_s,
                            double alpha, double bandwidth_hz) {
    const double r = horizontal_distance(ue.pos, uav.xy());
    return min_offload_capacity(path_factor(uav.theta_rad, uav.h_m, r, alpha), ue.data_bits,
                                ue.cpu_cycles, ue.p_max_w, latency_s, bandwidth_hz);
}

double marginal_cost_h(double f_hz, const CapacityTerm& t, double latency_s, double bandwidth_hz,
                       double weight_ue) {
    const double slack = latency_s * f_hz - t.cpu_cycles;
    if (!(slack > 0.0)) return -kInf;
    const double scale = weight_ue * t.path * t.data_bits * t.cpu_cycles;
    if (scale == 0.0) return 0.0;
    const double x = t.data_bits * f_hz / (bandwidth_hz * slack);
    // Log space: 2^x overflows long before the product does.
    const double log_mag = std::log(std::numbers::ln2 * scale / bandwidth_hz) -
                           2.0 * std::log(slack) + x * std::numbers::ln2;
    return -std::exp(log_mag);
}

double invert_h(double target, const CapacityTerm& term, double latency_s, double bandwidth_hz,
                double weight_ue, double lo, double hi, double eps, long* iterations) {
    const double h_lo = marginal_cost_h(lo, term, latency_s, bandwidth_hz, weight_ue);
    const double h_hi = marginal_cost_h(hi, term, latency_s, bandwidth_hz, weight_ue);
    if (!(lo < hi) || target < h_lo || target > h_hi) {
        std::ostringstream os;
        os << "target " << target << " outside h range [" << h_lo << ", " << h_hi << "] on ["
           << lo << ", " << hi << "]";
        throw BracketError(os.str());
    }
    for (int k = 0; k < kMaxBisection && hi - lo > eps * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (marginal_cost_h(mid, term, latency_s, bandwidth_hz, weight_ue) < target)
            lo = mid;
        else
            hi = mid;
        if (iterations) ++*iterations;
    }
    return 0.5 * (lo + hi);
}

double clamped_inverse(double target, const CapacityTerm& term, double latency_s,
                       double bandwidth_hz, double weight_ue, double eps, long* iterations) {
    const double f_min = term.f_min_hz;
    if (marginal_cost_h(f_min, term, latency_s, bandwidth_hz, weight_ue) >= target) return f_min;
    double lo = f_min;
    double hi = 2.0 * f_min;
    for (int k = 0; k < 2000 && marginal_cost_h(hi, term, latency_s, bandwidth_hz, weight_ue) < target;
         ++k) {
        lo = hi;
        hi *= 2.0;
    }
    return invert_h(target, term, latency_s, bandwidth_hz, weight_ue, lo, hi, eps, iterations);
}

double capacity_objective(const CapacitySubproblem& sub, const std::vector<double>& f_hz) {
    double transmit = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < sub.terms.size(); ++i) {
        const auto& t = sub.terms[i];
        const double slack = sub.latency_s * f_hz[i] - t.cpu_cycles;
        if (!(slack > 0.0)) return kInf;
        const double x = t.data_bits * f_hz[i] / (sub.bandwidth_hz * slack);
        transmit += t.path * std::expm1(x * std::numbers::ln2);
        total += f_hz[i];
    }
    return sub.weight_ue * transmit + sub.weight_uav * sub.s_coef * std::pow(total, sub.w_exp);
}

CapacityResult allocate_capacity_uav(const CapacitySubproblem& sub) {
    CapacityResult out;
    const std::size_t n = sub.terms.size();
    if (n == 0) return out;

    double total_min = 0.0;
    for (const auto& t : sub.terms) total_min += t.f_min_hz;
    if (total_min > sub.f_cap_hz * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "sum of minimum capacities " << total_min << " Hz exceeds UAV cap " << sub.f_cap_hz
           << " Hz";
        throw CapacityInfeasible(total_min - sub.f_cap_hz, os.str());
    }
    out.f_hz.resize(n);
    if (total_min >= sub.f_cap_hz) {
        for (std::size_t i = 0; i < n; ++i) out.f_hz[i] = sub.terms[i].f_min_hz;
        out.cap_binding = true;
        out.total_hz = total_min;
        return out;
    }

    const auto fill = [&](double target, std::vector<double>& f) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = clamped_inverse(target, sub.terms[i], sub.latency_s, sub.bandwidth_hz,
                                   sub.weight_ue, sub.eps_inverse, &out.inverse_iterations);
            sum += f[i];
        }
        return sum;
    };
    const double marginal_at_cap =
        sub.weight_uav * sub.s_coef * sub.w_exp * std::pow(sub.f_cap_hz, sub.w_exp - 1.0);
    // A tenth of the requested tolerance leaves room for the final sum.
    const double tol = 0.1 * sub.eps_multiplier * sub.f_cap_hz;

    std::vector<double> trial(n);
    std::vector<double> over(n);
    double sum_lo = fill(-marginal_at_cap, over);
    if (sum_lo > sub.f_cap_hz) {
        // Cap binds: find tau > 0 with sum_i max{h^-1(-c - tau), f_min} = f_cap.
        // The sum decreases in tau and tends to sum f_min < f_cap.
        double tau_lo = 0.0;
        double tau_hi = marginal_at_cap;
        double sum_hi = fill(-marginal_at_cap - tau_hi, out.f_hz);
        while (sum_hi > sub.f_cap_hz) {
            tau_lo = tau_hi;
            sum_lo = sum_hi;
            over = out.f_hz;
            tau_hi *= 2.0;
            sum_hi = fill(-marginal_at_cap - tau_hi, out.f_hz);
            ++out.outer_iterations;
        }
        for (int k = 0; k < kMaxBisection && sub.f_cap_hz - sum_hi > tol; ++k) {
            const double mid = 0.5 * (tau_lo + tau_hi);
            if (mid <= tau_lo || mid >= tau_hi) break;
            const double s = fill(-marginal_at_cap - mid, trial);
            if (s > sub.f_cap_hz) {
                tau_lo = mid;
                sum_lo = s;
                over.swap(trial);
            } else {
                tau_hi = mid;
                sum_hi = s;
                out.f_hz.swap(trial);
            }
            ++out.outer_iterations;
        }
        // Close the remaining gap by interpolating towards the over-cap
        // bracket end; both ends respect f_min, so the blend does too.
        if (sum_lo > sum_hi && sum_hi < sub.f_cap_hz) {
            const double t = (sub.f_cap_hz - sum_hi) / (sum_lo - sum_hi);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                out.f_hz[i] += t * (over[i] - out.f_hz[i]);
                total += out.f_hz[i];
            }
            if (total <= sub.f_cap_hz) sum_hi = total;
            else fill(-marginal_at_cap - tau_hi, out.f_hz);
        }
        out.cap_binding = true;
        out.cap_multiplier = tau_hi;
        out.total_hz = sum_hi;
        return out;
    }

    // Cap slack: the total nu solves sum_i max{h^-1(-W2 s w nu^{w-1}), f_min} = nu.
    const auto target_at = [&](double nu) {
        return -sub.weight_uav * sub.s_coef * sub.w_exp * std::pow(nu, sub.w_exp - 1.0);
    };
    double nu_lo = total_min;
    double nu_hi = sub.f_cap_hz;
    double sum_hi = fill(target_at(nu_hi), out.f_hz);
    for (int k = 0; k < kMaxBisection && nu_hi - nu_lo > 0.1 * sub.eps_multiplier * nu_lo; ++k) {
        const double mid = 0.5 * (nu_lo + nu_hi);
        if (mid <= nu_lo || mid >= nu_hi) break;
        const double s = fill(target_at(mid), trial);
        if (s > mid) {
            nu_lo = mid;
        } else {
            nu_hi = mid;
            sum_hi = s;
            out.f_hz.swap(trial);
        }
        ++out.outer_iterations;
    }
    out.total_hz = sum_hi;
    return out;
}

double allocate_local(const UeProfile& ue, double latency_s) {
    if (!locally_feasible(ue, latency_s)) {
        std::ostringstream os;
        os << "UE " << ue.id << " needs " << ue.cpu_cycles / latency_s
           << " Hz locally, bound is " << local_capacity_bound(ue) << " Hz";
        throw LocalInfeasible(os.str());
    }
    return ue.cpu_cycles / latency_s;
}

}  // namespace uavmec
