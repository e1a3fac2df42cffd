#include "uavmec/served_set.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "uavmec/capacity.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/placement.hpp"
#include "uavmec/power.hpp"

namespace uavmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Planner {
public:
    Planner(const Scenario& s, int j, const std::vector<int>& members, int rounds)
        : s_(s), j_(j), members_(members), rounds_(rounds),
          alpha_(derive_constants(s.params).alpha) {}

    // Alternate the optimal split (for the current placement) with the optimal
    // placement (for the current split).
    ServedSetPlan at_theta(double theta) const {
        const auto& u = s_.uavs[j_];
        const double T = s_.latency_s;
        const double B = s_.params.bandwidth_hz;
        const std::size_t n = members_.size();
        auto psub = make_placement_subproblem(u, 0.0);
        for (int i : members_) {
            psub.ue_pos.push_back(s_.ues[i].pos);
            psub.weight.push_back(1.0);
        }
        auto start = try_fixed_beamwidth(psub, theta);
        ServedSetPlan plan;
        if (!start) return plan;
        UavPlacement z = *start;

        CapacitySubproblem csub;
        csub.latency_s = T;
        csub.bandwidth_hz = B;
        csub.f_cap_hz = effective_uav_capacity(u);
        csub.weight_ue = s_.params.weight_ue;
        csub.weight_uav = s_.params.weight_uav;
        csub.s_coef = u.s_coef;
        csub.w_exp = u.w_exp;
        csub.eps_inverse = s_.params.bisect_tol_inverse;
        csub.eps_multiplier = s_.params.bisect_tol_multiplier;
        csub.terms.resize(n);
        psub.path_budget.resize(n);

        for (int round = 0; round < rounds_; ++round) {
            try {
                for (std::size_t k = 0; k < n; ++k) {
                    const auto& ue = s_.ues[members_[k]];
                    auto& t = csub.terms[k];
                    t.path = path_factor(z.theta_rad, z.h_m, horizontal_distance(ue.pos, z.xy()), alpha_);
                    t.data_bits = ue.data_bits;
                    t.cpu_cycles = ue.cpu_cycles;
                    t.f_min_hz = min_offload_capacity(t.path, ue.data_bits, ue.cpu_cycles, ue.p_max_w, T, B);
                }
                auto cap = allocate_capacity_uav(csub);
                const double cost = evaluate(z, cap.f_hz);
                if (cost >= plan.cost * (1.0 - 1e-12)) break;
                plan.cost = cost;
                plan.z = z;
                plan.f_hz = std::move(cap.f_hz);
            } catch (const Error&) {
                break;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const auto& ue = s_.ues[members_[k]];
                const double L = power_coefficient(ue, plan.f_hz[k], T, alpha_, B);
                psub.weight[k] = L;
                psub.path_budget[k] = L > 0.0 ? ue.p_max_w / L : kInf;
            }
            auto next = try_fixed_beamwidth(psub, theta);
            if (!next) break;
            const double moved = evaluate(*next, plan.f_hz);
            if (moved >= plan.cost * (1.0 - 1e-12)) break;
            plan.cost = moved;
            plan.z = z = *next;
        }
        plan.p_w.clear();
        for (std::size_t k = 0; k < plan.f_hz.size(); ++k) {
            const auto& ue = s_.ues[members_[k]];
            plan.p_w.push_back(std::min(ue.p_max_w, optimal_uplink_power(ue, plan.z, plan.f_hz[k], T,
                                                                          alpha_, B)));
        }
        return plan;
    }

private:
    double evaluate(const UavPlacement& z, const std::vector<double>& f) const {
        const auto& u = s_.uavs[j_];
        double p = 0.0, sum = 0.0;
        for (std::size_t k = 0; k < members_.size(); ++k) {
            const auto& ue = s_.ues[members_[k]];
            if (!is_covered(horizontal_distance(ue.pos, z.xy()), z.h_m, z.theta_rad)) return kInf;
            const double pk = optimal_uplink_power(ue, z, f[k], s_.latency_s, alpha_, s_.params.bandwidth_hz);
            if (pk > ue.p_max_w * (1 + 1e-12)) return kInf;
            p += pk;
            sum += f[k];
        }
        return s_.params.weight_ue * p +
               s_.params.weight_uav * (u.s_coef * std::pow(sum, u.w_exp) + u.propulsion_w);
    }

    const Scenario& s_;
    int j_;
    const std::vector<int>& members_;
    int rounds_;
    double alpha_;
};

}  // namespace

ServedSetPlan plan_served_set(const Scenario& s, int j, const std::vector<int>& members,
                              const ServedSetOptions& opt) {
    const auto& u = s.uavs[j];
    ServedSetPlan best;
    if (members.empty() || static_cast<int>(members.size()) > u.max_users) return best;
    const Planner planner(s, j, members, opt.block_rounds);
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < opt.thetas.size(); ++k) {
        auto plan = planner.at_theta(opt.thetas[k]);
        if (plan.cost < best.cost) best = std::move(plan), best_k = k;
    }
    if (!best.feasible() || !opt.polish || opt.thetas.size() < 2) return best;
    const double lo = best_k > 0 ? opt.thetas[best_k - 1] : opt.thetas[best_k];
    const double hi = best_k + 1 < opt.thetas.size() ? opt.thetas[best_k + 1] : opt.thetas[best_k];
    std::uintmax_t iters = 60;
    boost::math::tools::brent_find_minima(
        [&](double theta) {
            auto plan = planner.at_theta(theta);
            const double c = plan.cost;
            if (c < best.cost) best = std::move(plan);
            return std::isfinite(c) ? c : std::numeric_limits<double>::max();
        },
        lo, hi, std::numeric_limits<double>::digits / 2, iters);
    return best;
}

}  // namespace uavmec
