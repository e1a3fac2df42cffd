#include "uavmec/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "uavmec/errors.hpp"
#include "uavmec/fcm.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/power.hpp"
#include "uavmec/served_set.hpp"

namespace uavmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SolutionReport ecc_solve(const Scenario& s, const Solution& initial, SolverOptions opt) {
    opt.capacity = CapacityRule::EqualSplit;
    return solve(s, initial, opt);
}

SolutionReport fixed_placement_solve(const Scenario& s, const Solution& initial, SolverOptions opt) {
    opt.optimize_placement = false;
    opt.merge_uavs = false;
    return solve(s, initial, opt);
}

SolutionReport exhaustive_solve(const Scenario& s, const ExhaustiveLimits& lim) {
    const int n = s.num_ues();
    const int m = s.num_uavs();
    if (n > lim.n_max || m > lim.m_max) {
        std::ostringstream os;
        os << "exhaustive search is limited to N <= " << lim.n_max << ", M <= " << lim.m_max
           << " (got N = " << n << ", M = " << m << ")";
        throw ScaleExceeded(os.str());
    }
    const auto start = std::chrono::steady_clock::now();
    ServedSetOptions plan_opt;
    plan_opt.polish = true;
    plan_opt.block_rounds = lim.block_rounds;
    std::map<std::pair<int, unsigned>, ServedSetPlan> cache;
    auto plan_for = [&](int j, unsigned mask) -> const ServedSetPlan& {
        auto it = cache.find({j, mask});
        if (it != cache.end()) return it->second;
        const auto& u = s.uavs[j];
        const int pts = std::max(2, lim.theta_points);
        plan_opt.thetas.clear();
        for (int k = 0; k < pts; ++k)
            plan_opt.thetas.push_back(u.theta_min_rad + (u.theta_max_rad - u.theta_min_rad) * k / (pts - 1));
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) members.push_back(i);
        return cache.emplace(std::make_pair(j, mask), plan_served_set(s, j, members, plan_opt)).first->second;
    };

    std::vector<double> local_power(n, kInf);
    for (int i = 0; i < n; ++i)
        if (locally_feasible(s.ues[i], s.latency_s))
            local_power[i] = s.params.weight_ue * local_exec_power(s.ues[i], s.ues[i].cpu_cycles / s.latency_s);

    long total = 1;
    for (int i = 0; i < n; ++i) total *= (m + 1);
    double best = kInf;
    Assignment best_assoc;
    Assignment a(n, kLocal);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < n; ++i, c /= (m + 1)) a[i] = static_cast<int>(c % (m + 1));
        double cost = 0.0;
        std::vector<unsigned> mask(m, 0u);
        for (int i = 0; i < n && std::isfinite(cost); ++i) {
            if (a[i] == kLocal) cost += local_power[i];
            else mask[uav_of(a[i])] |= 1u << i;
        }
        for (int j = 0; j < m && std::isfinite(cost); ++j)
            if (mask[j]) cost += plan_for(j, mask[j]).cost;
        if (cost < best) best = cost, best_assoc = a;
    }
    if (!std::isfinite(best)) {
        std::vector<UeRejection> none;
        throw InfeasibleScenario(none, "no association of the " + std::to_string(n) +
                                           " UEs is feasible");
    }

    Solution sol;
    sol.assoc = best_assoc;
    sol.f_hz.assign(n, 0.0);
    sol.p_w.assign(n, 0.0);
    Vec2 mean;
    for (const auto& ue : s.ues) mean = {mean.x + ue.pos.x / n, mean.y + ue.pos.y / n};
    for (int j = 0; j < m; ++j) sol.placement.push_back({mean.x, mean.y, s.uavs[j].h_min_m, s.uavs[j].theta_min_rad});
    for (int i = 0; i < n; ++i)
        if (best_assoc[i] == kLocal) sol.f_hz[i] = s.ues[i].cpu_cycles / s.latency_s;
    for (int j = 0; j < m; ++j) {
        unsigned mask = 0;
        for (int i = 0; i < n; ++i)
            if (best_assoc[i] == choice_of(j)) mask |= 1u << i;
        if (!mask) continue;
        const auto& plan = plan_for(j, mask);
        sol.placement[j] = plan.z;
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            sol.f_hz[i] = plan.f_hz[k];
            sol.p_w[i] = plan.p_w[k];
            ++k;
        }
    }

    SolutionReport rep;
    rep.solution = std::move(sol);
    rep.objective_w = evaluate_objective(s, rep.solution);
    rep.constraints = check_feasibility(s, rep.solution);
    rep.trace.push_back({0, rep.objective_w});
    rep.converged = true;
    rep.counters.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

SolutionReport multistart_solve(const Scenario& s, int starts, const SolverOptions& opt) {
    std::optional<SolutionReport> best;
    std::string last_error = "no starts requested";
    for (int r = 0; r < starts; ++r) {
        Solution init;
        try {
            init = bootstrap(s, s.params.rng_seed + static_cast<std::uint64_t>(r));
        } catch (const InfeasibleScenario& e) {
            last_error = e.what();
            continue;
        }
        auto rep = solve(s, init, opt);
        if (!best || rep.objective_w < best->objective_w) best = std::move(rep);
    }
    if (!best) throw InfeasibleScenario({}, "every start failed to bootstrap: " + last_error);
    return *best;
}

std::vector<double> capacity_grid_oracle(const CapacitySubproblem& sub, int grid_points,
                                         int refinements) {
    const std::size_t n = sub.terms.size();
    if (n > 3) throw ScaleExceeded("capacity grid oracle handles at most 3 UEs");
    if (n == 0) return {};
    double floor_sum = 0.0;
    for (const auto& t : sub.terms) floor_sum += t.f_min_hz;
    if (floor_sum > sub.f_cap_hz * (1.0 + 1e-12))
        throw CapacityInfeasible(floor_sum - sub.f_cap_hz, "minimum capacities exceed the cap");

    const int g = std::max(2, grid_points);
    std::vector<double> lo(n), hi(n), best(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = sub.terms[i].f_min_hz;
        hi[i] = sub.f_cap_hz - (floor_sum - sub.terms[i].f_min_hz);
        best[i] = lo[i];
    }
    double best_value = capacity_objective(sub, best);
    std::vector<double> f(n);

    for (int pass = 0; pass <= refinements; ++pass) {
        // Free coordinates on a grid; the last one spans what the budget leaves.
        std::function<void(std::size_t, double)> walk = [&](std::size_t k, double used) {
            if (k + 1 == n) {
                const double top = std::min(hi[k], sub.f_cap_hz - used);
                if (top < lo[k]) return;
                for (int a = 0; a <= g; ++a) {
                    f[k] = a == g ? top : lo[k] + (top - lo[k]) * a / g;
                    const double v = capacity_objective(sub, f);
                    if (v < best_value) best_value = v, best = f;
                }
                return;
            }
            for (int a = 0; a <= g; ++a) {
                f[k] = lo[k] + (hi[k] - lo[k]) * a / g;
                if (used + f[k] > sub.f_cap_hz) break;
                walk(k + 1, used + f[k]);
            }
        };
        walk(0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double cell = 2.0 * (hi[i] - lo[i]) / g;
            const double floor_i = sub.terms[i].f_min_hz;
            const double ceil_i = sub.f_cap_hz - (floor_sum - floor_i);
            lo[i] = std::max(floor_i, best[i] - cell);
            hi[i] = std::min(ceil_i, best[i] + cell);
        }
    }
    return best;
}

}  // namespace uavmec
