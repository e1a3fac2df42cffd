#include "uavmec/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "uavmec/capacity.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/placement.hpp"
#include "uavmec/power.hpp"
#include "uavmec/served_set.hpp"

namespace uavmec {

namespace {

struct Context {
    const Scenario& s;
    double alpha;
    double T;
    double B;
};

// Closed-form power for every offloading UE at its current f and placement.
void refresh_powers(const Context& ctx, Solution& sol) {
    for (std::size_t i = 0; i < sol.assoc.size(); ++i) {
        if (sol.assoc[i] == kLocal) {
            sol.p_w[i] = 0.0;
            continue;
        }
        const auto& ue = ctx.s.ues[i];
        const auto& z = sol.placement[uav_of(sol.assoc[i])];
        sol.p_w[i] = std::min(ue.p_max_w, optimal_uplink_power(ue, z, sol.f_hz[i], ctx.T, ctx.alpha, ctx.B));
    }
}

// Accept `next` only if it is feasible and does not raise the objective.
bool accept(const Context& ctx, Solution& cur, double& value, Solution next) {
    const double v = evaluate_objective(ctx.s, next);
    if (!(v <= value) || !check_feasibility(ctx.s, next).feasible()) return false;
    cur = std::move(next);
    value = v;
    return true;
}

// Shares for the UEs served by UAV j at its current placement under `rule`.
std::vector<double> split_for_uav(const Context& ctx, const Solution& cur, int j,
                                  const std::vector<int>& members, CapacityRule rule,
                                  SolverCounters& cnt) {
    const auto& s = ctx.s;
    const auto& u = s.uavs[j];
    const auto& z = cur.placement[j];
    CapacitySubproblem sub;
    sub.latency_s = ctx.T;
    sub.bandwidth_hz = ctx.B;
    sub.f_cap_hz = effective_uav_capacity(u);
    sub.weight_ue = s.params.weight_ue;
    sub.weight_uav = s.params.weight_uav;
    sub.s_coef = u.s_coef;
    sub.w_exp = u.w_exp;
    sub.eps_inverse = s.params.bisect_tol_inverse;
    sub.eps_multiplier = s.params.bisect_tol_multiplier;
    for (int i : members) {
        const auto& ue = s.ues[i];
        const double r = horizontal_distance(ue.pos, z.xy());
        CapacityTerm t{path_factor(z.theta_rad, z.h_m, r, ctx.alpha), ue.data_bits, ue.cpu_cycles, 0.0};
        t.f_min_hz = min_offload_capacity(t.path, ue.data_bits, ue.cpu_cycles, ue.p_max_w, ctx.T, ctx.B);
        sub.terms.push_back(t);
    }
    if (rule == CapacityRule::Optimal) {
        auto res = allocate_capacity_uav(sub);
        cnt.capacity_bisections += res.outer_iterations;
        cnt.inverse_bisections += res.inverse_iterations;
        return std::move(res.f_hz);
    }
    std::vector<double> f_min;
    for (const auto& t : sub.terms) f_min.push_back(t.f_min_hz);
    return equal_split(f_min, sub.f_cap_hz);
}

// Best single merge per pass (source j emptied into target k), repeated while
// one strictly lowers the objective.
void merge_step(const Context& ctx, Solution& cur, double& value, const SolverOptions& opt,
                SolverCounters& cnt) {
    const auto& s = ctx.s;
    for (;;) {
        const auto served = served_sets(cur.assoc, s.num_uavs());
        std::optional<Solution> best;
        double best_value = value;
        for (int j = 0; j < s.num_uavs(); ++j) {
            if (served[j].empty()) continue;
            for (int k = 0; k < s.num_uavs(); ++k) {
                if (k == j || served[k].empty()) continue;
                std::vector<int> members = served[k];
                members.insert(members.end(), served[j].begin(), served[j].end());
                std::sort(members.begin(), members.end());
                ServedSetOptions po;
                po.thetas = theta_grid(s.uavs[k].theta_min_rad, s.uavs[k].theta_max_rad,
                                       s.params.theta_step_rad);
                po.polish = opt.refine_theta;
                const auto plan = plan_served_set(s, k, members, po);
                cnt.theta_evaluations += static_cast<long>(po.thetas.size());
                if (!plan.feasible()) continue;
                Solution next = cur;
                next.placement[k] = plan.z;
                for (std::size_t m = 0; m < members.size(); ++m) {
                    next.assoc[members[m]] = choice_of(k);
                    next.f_hz[members[m]] = plan.f_hz[m];
                }
                if (opt.capacity != CapacityRule::Optimal) {
                    try {
                        const auto f = split_for_uav(ctx, next, k, members, opt.capacity, cnt);
                        for (std::size_t m = 0; m < members.size(); ++m) next.f_hz[members[m]] = f[m];
                    } catch (const Error&) {
                        continue;
                    }
                }
                refresh_powers(ctx, next);
                const double v = evaluate_objective(s, next);
                if (v < best_value && check_feasibility(s, next).feasible()) {
                    best_value = v;
                    best = std::move(next);
                }
            }
        }
        if (!best) return;
        cur = std::move(*best);
        value = best_value;
        ++cnt.merges_accepted;
    }
}

Solution capacity_step(const Context& ctx, const Solution& cur, CapacityRule rule,
                       SolverCounters& cnt) {
    Solution next = cur;
    for (std::size_t i = 0; i < cur.assoc.size(); ++i)
        if (cur.assoc[i] == kLocal) next.f_hz[i] = allocate_local(ctx.s.ues[i], ctx.T);
    const auto served = served_sets(cur.assoc, ctx.s.num_uavs());
    for (int j = 0; j < ctx.s.num_uavs(); ++j) {
        if (served[j].empty()) continue;
        const auto f = split_for_uav(ctx, cur, j, served[j], rule, cnt);
        for (std::size_t k = 0; k < served[j].size(); ++k) next.f_hz[served[j][k]] = f[k];
    }
    refresh_powers(ctx, next);
    return next;
}

// Re-place every served UAV; each UAV's move is kept only if it helps, which
// is exact because the objective separates across UAVs at fixed (A, F).
void placement_step(const Context& ctx, Solution& cur, double& value, const SolverOptions& opt,
                    SolverCounters& cnt) {
    const auto& s = ctx.s;
    const auto served = served_sets(cur.assoc, s.num_uavs());
    for (int j = 0; j < s.num_uavs(); ++j) {
        if (served[j].empty()) continue;
        auto sub = make_placement_subproblem(s.uavs[j], s.params.theta_step_rad);
        sub.refine_theta = opt.refine_theta;
        for (int i : served[j]) {
            const auto& ue = s.ues[i];
            const double L = power_coefficient(ue, cur.f_hz[i], ctx.T, ctx.alpha, ctx.B);
            sub.ue_pos.push_back(ue.pos);
            sub.weight.push_back(L);
            sub.path_budget.push_back(L > 0.0 ? ue.p_max_w / L : std::numeric_limits<double>::infinity());
        }
        PlacementResult res;
        try {
            res = optimize_placement(sub);
        } catch (const AllInfeasible&) {
            continue;
        }
        cnt.theta_evaluations += static_cast<long>(res.samples.size());
        Solution next = cur;
        next.placement[j] = res.z;
        refresh_powers(ctx, next);
        if (accept(ctx, cur, value, std::move(next))) ++cnt.placement_accepted;
    }
}

}  // namespace

SolverOptions default_options(const Scenario& s) {
    SolverOptions o;
    o.max_outer = s.params.outer_max_iter;
    o.tol = s.params.outer_tol;
    return o;
}

std::vector<double> equal_split(const std::vector<double>& f_min, double cap) {
    const double n = static_cast<double>(f_min.size());
    std::vector<double> f;
    double sum = 0.0, floor_sum = 0.0;
    for (double lo : f_min) {
        f.push_back(std::max(cap / n, lo));
        sum += f.back();
        floor_sum += lo;
    }
    if (sum > cap && sum > floor_sum) {
        const double keep = std::max(0.0, cap - floor_sum) / (sum - floor_sum);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = f_min[i] + (f[i] - f_min[i]) * keep;
    }
    return f;
}

SolutionReport solve(const Scenario& s, const Solution& initial, const SolverOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    const Context ctx{s, derive_constants(s.params).alpha, s.latency_s, s.params.bandwidth_hz};

    SolutionReport rep;
    {
        const auto c = check_feasibility(s, initial);
        if (!c.feasible()) throw SolverAssertion("initial solution is infeasible: " + c.describe());
    }
    Solution cur = initial;
    double value = evaluate_objective(s, cur);
    rep.trace.push_back({0, value});
    auto& cnt = rep.counters;

    for (int t = 1; t <= opt.max_outer; ++t) {
        cnt.outer_iterations = t;
        const double before = value;
        try {
            // (a) association at fixed (F, P, Z)
            auto assoc = solve_association(s, cur, opt.association);
            cnt.association_rounds += assoc.outer_iterations;
            cnt.association_inner += assoc.inner_iterations;
            if (assoc.changed && accept(ctx, cur, value, std::move(assoc.solution)))
                ++cnt.association_accepted;
            if (opt.merge_uavs) merge_step(ctx, cur, value, opt, cnt);

            // (b) capacity, with powers following the closed form
            auto next = capacity_step(ctx, cur, opt.capacity, cnt);
            if (opt.capacity == CapacityRule::EqualSplit) {
                cur = std::move(next);
                value = evaluate_objective(s, cur);
            } else {
                accept(ctx, cur, value, std::move(next));
            }

            // (c) placement, (d) power
            if (opt.optimize_placement) placement_step(ctx, cur, value, opt, cnt);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "outer iteration " << t << ": " << e.what();
            throw SolverAssertion(os.str());
        }
        rep.trace.push_back({t, value});
        const double change = std::abs(before - value);
        if (change == 0.0 || change < opt.tol * std::abs(before)) {
            rep.converged = true;
            break;
        }
    }

    rep.solution = std::move(cur);
    rep.objective_w = value;
    rep.constraints = check_feasibility(s, rep.solution);
    cnt.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace uavmec
