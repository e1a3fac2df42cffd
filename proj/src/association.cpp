#include "uavmec/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "uavmec/capacity.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/objective.hpp"
#include "uavmec/power.hpp"

namespace uavmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uav_caps(const Scenario& s) {
    std::vector<double> caps;
    for (const auto& u : s.uavs) caps.push_back(effective_uav_capacity(u));
    return caps;
}

std::vector<double> counts_of(const Assignment& a, int m) {
    std::vector<double> n(static_cast<std::size_t>(m), 0.0);
    for (int c : a)
        if (c != kLocal) n[uav_of(c)] += 1.0;
    return n;
}

std::vector<double> loads_of(const Assignment& a, const CandidateTable& cand, int m) {
    std::vector<double> load(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != kLocal) load[uav_of(a[i])] += cand[i][a[i]].f_hz;
    return load;
}

// Reweighted surrogate of the objective: the indicator replaced by delta n + rho.
double surrogate_objective(const Scenario& s, const CandidateTable& cand, const Assignment& a,
                           const ReweightState& w) {
    const int m = s.num_uavs();
    const auto load = loads_of(a, cand, m);
    const auto n = counts_of(a, m);
    double ue = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ue += cand[i][a[i]].p_w;
    double uav = 0.0;
    for (int j = 0; j < m; ++j) {
        const auto& u = s.uavs[j];
        uav += u.s_coef * std::pow(load[j], u.w_exp) + u.propulsion_w * (w.delta[j] * n[j] + w.rho[j]);
    }
    return s.params.weight_ue * ue + s.params.weight_uav * uav;
}

using CostMatrix = std::vector<std::vector<double>>;

CostMatrix cost_matrix(const Scenario& s, const CandidateTable& cand, const ReweightState& w,
                       const DualState& d) {
    CostMatrix h(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) {
        h[i].assign(cand[i].size(), kInf);
        for (std::size_t c = 0; c < cand[i].size(); ++c)
            if (cand[i][c].allowed)
                h[i][c] = candidate_cost_h(s, static_cast<int>(i), static_cast<int>(c), cand[i][c], w, d);
    }
    return h;
}

// Primal recovery: UEs with the most to lose pick first, each taking its
// cheapest choice that still has room under the user limit and capacity cap.
std::optional<Assignment> recover_primal(const Scenario& s, const CandidateTable& cand,
                                         const CostMatrix& h, const std::vector<double>& caps) {
    const std::size_t n = cand.size();
    std::vector<double> regret(n, kInf);
    std::vector<std::vector<int>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < h[i].size(); ++c)
            if (std::isfinite(h[i][c])) order[i].push_back(static_cast<int>(c));
        std::stable_sort(order[i].begin(), order[i].end(),
                         [&](int a, int b) { return h[i][a] < h[i][b]; });
        if (order[i].size() >= 2) regret[i] = h[i][order[i][1]] - h[i][order[i][0]];
    }
    std::vector<std::size_t> ues(n);
    std::iota(ues.begin(), ues.end(), 0);
    std::stable_sort(ues.begin(), ues.end(),
                     [&](std::size_t a, std::size_t b) { return regret[a] > regret[b]; });

    Assignment out(n, kLocal);
    std::vector<double> load(s.uavs.size(), 0.0);
    std::vector<int> count(s.uavs.size(), 0);
    for (std::size_t i : ues) {
        bool placed = false;
        for (int c : order[i]) {
            if (c != kLocal) {
                const int j = uav_of(c);
                if (count[j] >= s.uavs[j].max_users) continue;
                if (load[j] + cand[i][c].f_hz > caps[j] * (1 + 1e-12)) continue;
                load[j] += cand[i][c].f_hz;
                ++count[j];
            }
            out[i] = c;
            placed = true;
            break;
        }
        if (!placed) return std::nullopt;
    }
    return out;
}

// Exact-objective descent over single reassignments and whole-UAV evacuations.
void local_search(const Scenario& s, const CandidateTable& cand, Assignment& a, double& value) {
    const int m = s.num_uavs();
    for (int pass = 0; pass < 100; ++pass) {
        bool improved = false;
        // Evacuate one served UAV: its UEs greedily take their best other choice.
        for (int j = 0; j < m; ++j) {
            Assignment trial = a;
            bool served = false, ok = true;
            for (std::size_t i = 0; i < a.size() && ok; ++i) {
                if (a[i] != choice_of(j)) continue;
                served = true;
                double best = kInf;
                int pick = -1;
                for (int c = 0; c <= m; ++c) {
                    if (c == choice_of(j) || !cand[i][c].allowed) continue;
                    trial[i] = c;
                    const double v = assignment_objective(s, cand, trial);
                    if (v < best) best = v, pick = c;
                }
                ok = pick >= 0;
                trial[i] = ok ? pick : a[i];
            }
            if (!served || !ok) continue;
            const double v = assignment_objective(s, cand, trial);
            if (v < value) {
                a = std::move(trial);
                value = v;
                improved = true;
            }
        }
        // Best single move.
        double best = value;
        std::size_t bi = 0;
        int bc = -1;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const int keep = a[i];
            for (int c = 0; c <= m; ++c) {
                if (c == keep || !cand[i][c].allowed) continue;
                a[i] = c;
                const double v = assignment_objective(s, cand, a);
                if (v < best) best = v, bi = i, bc = c;
            }
            a[i] = keep;
        }
        if (bc >= 0) {
            a[bi] = bc;
            value = best;
            improved = true;
        }
        if (!improved) break;
    }
}

}  // namespace

ReweightState update_weights(const std::vector<double>& counts, double tau, int iteration) {
    ReweightState w;
    w.iteration = iteration;
    const double norm = std::log1p(1.0 / tau);
    for (double x : counts) {
        const double denom = (x + tau) * norm;
        w.delta.push_back(1.0 / denom);
        w.rho.push_back(((x + tau) * std::log1p(x / tau) - x) / denom);
    }
    return w;
}

CandidateTable build_candidates(const Scenario& s, const Solution& cur) {
    const auto dc = derive_constants(s.params);
    const double T = s.latency_s;
    const double B = s.params.bandwidth_hz;
    const int m = s.num_uavs();
    const auto caps = uav_caps(s);
    std::vector<double> load(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < cur.assoc.size(); ++i)
        if (cur.assoc[i] != kLocal) load[uav_of(cur.assoc[i])] += cur.f_hz[i];

    CandidateTable table(s.ues.size(), std::vector<Candidate>(static_cast<std::size_t>(m) + 1));
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        const auto& ue = s.ues[i];
        auto& local = table[i][kLocal];
        local.allowed = locally_feasible(ue, T);
        if (local.allowed) {
            local.f_hz = cur.assoc[i] == kLocal ? cur.f_hz[i] : ue.cpu_cycles / T;
            local.p_w = local_exec_power(ue, local.f_hz);
            local.latency_s = ue.cpu_cycles / local.f_hz;
        }
        for (int j = 0; j < m; ++j) {
            auto& c = table[i][choice_of(j)];
            const auto& z = cur.placement[j];
            const auto& u = s.uavs[j];
            const double r = horizontal_distance(ue.pos, z.xy());
            if (!is_covered(r, z.h_m, z.theta_rad)) continue;
            if (cur.assoc[i] == choice_of(j)) {
                c = {true, cur.f_hz[i], cur.p_w[i],
                     combined_latency(ue, z, cur.f_hz[i], cur.p_w[i], dc.alpha, B)};
                continue;
            }
            CapacityTerm term{path_factor(z.theta_rad, z.h_m, r, dc.alpha), ue.data_bits,
                              ue.cpu_cycles, 0.0};
            try {
                term.f_min_hz = min_offload_capacity(term.path, ue.data_bits, ue.cpu_cycles,
                                                     ue.p_max_w, T, B);
            } catch (const DeadlineUnreachable&) {
                continue;
            }
            const double price = s.params.weight_uav * u.s_coef * u.w_exp *
                                 std::pow(load[j] + term.f_min_hz, u.w_exp - 1.0);
            double f = clamped_inverse(-price, term, T, B, s.params.weight_ue,
                                       s.params.bisect_tol_inverse);
            f = std::max(term.f_min_hz, std::min(f, caps[j] - load[j]));
            const double p = std::min(ue.p_max_w, optimal_uplink_power(ue, z, f, T, dc.alpha, B));
            c = {true, f, p, combined_latency(ue, z, f, p, dc.alpha, B)};
        }
    }
    return table;
}

double candidate_cost_h(const Scenario& s, int ue, int choice, const Candidate& c,
                        const ReweightState& w, const DualState& d) {
    const double w1 = s.params.weight_ue;
    const double base = (w1 + d.gamma[ue]) * c.p_w + d.beta[ue] * c.latency_s;
    if (choice == kLocal) return base;
    const int j = uav_of(choice);
    return base + s.params.weight_uav * s.uavs[j].propulsion_w * w.delta[j] + d.lambda[j] +
           d.mu[j] * c.f_hz;
}

InnerSolution dual_inner_solve(const Scenario& s, const CandidateTable& cand,
                               const ReweightState& w, const DualState& d) {
    InnerSolution out;
    out.assoc.assign(cand.size(), kLocal);
    std::vector<int> stranded;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        double best = kInf;
        int pick = -1;
        for (std::size_t c = 0; c < cand[i].size(); ++c) {
            if (!cand[i][c].allowed) continue;
            const double h = candidate_cost_h(s, static_cast<int>(i), static_cast<int>(c), cand[i][c], w, d);
            if (h < best || pick < 0) best = h, pick = static_cast<int>(c);
        }
        if (pick < 0) stranded.push_back(static_cast<int>(i));
        else out.assoc[i] = pick;
    }
    if (!stranded.empty()) {
        std::ostringstream os;
        os << stranded.size() << " UE(s) can neither run locally nor reach a covering UAV:";
        for (int i : stranded) os << ' ' << s.ues[i].id;
        throw NoFeasibleChoice(stranded, os.str());
    }
    for (std::size_t j = 0; j < s.uavs.size(); ++j) {
        const auto& u = s.uavs[j];
        const double mu = d.mu[j];
        const double f = mu > 0.0 ? std::pow(mu / (s.params.weight_uav * u.w_exp * u.s_coef),
                                             1.0 / (u.w_exp - 1.0))
                                  : 0.0;
        out.aux_f_hz.push_back(std::clamp(f, 0.0, effective_uav_capacity(u)));
    }
    return out;
}

DualResiduals dual_residuals(const Scenario& s, const CandidateTable& cand,
                             const InnerSolution& inner) {
    DualResiduals r;
    const int m = s.num_uavs();
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const auto& c = cand[i][inner.assoc[i]];
        r.latency.push_back(c.latency_s - s.latency_s);
        r.ue_power.push_back(c.p_w - s.ues[i].p_max_w);
    }
    const auto n = counts_of(inner.assoc, m);
    const auto load = loads_of(inner.assoc, cand, m);
    for (int j = 0; j < m; ++j) {
        r.count.push_back(n[j] - s.uavs[j].max_users);
        r.coupling.push_back(load[j] - inner.aux_f_hz[j]);
    }
    return r;
}

DualState multiplier_update(const DualState& d, const DualResiduals& r, const DualSteps& st) {
    DualState out = d;
    for (std::size_t i = 0; i < d.beta.size(); ++i) {
        out.beta[i] = std::max(0.0, d.beta[i] + st.beta[i] * r.latency[i]);
        out.gamma[i] = std::max(0.0, d.gamma[i] + st.gamma[i] * r.ue_power[i]);
    }
    for (std::size_t j = 0; j < d.lambda.size(); ++j) {
        out.lambda[j] = std::max(0.0, d.lambda[j] + st.lambda[j] * r.count[j]);
        out.mu[j] = d.mu[j] + st.mu[j] * r.coupling[j];
    }
    return out;
}

DualState multiplier_update(const DualState& d, const DualResiduals& r, double phi, double psi) {
    DualSteps st;
    st.beta.assign(d.beta.size(), phi);
    st.gamma.assign(d.gamma.size(), phi);
    st.lambda.assign(d.lambda.size(), phi);
    st.mu.assign(d.mu.size(), psi);
    return multiplier_update(d, r, st);
}

double assignment_objective(const Scenario& s, const CandidateTable& cand, const Assignment& a) {
    const int m = s.num_uavs();
    std::vector<double> load(static_cast<std::size_t>(m), 0.0);
    std::vector<int> count(static_cast<std::size_t>(m), 0);
    double ue = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& c = cand[i][a[i]];
        if (!c.allowed) return kInf;
        ue += c.p_w;
        if (a[i] != kLocal) {
            load[uav_of(a[i])] += c.f_hz;
            ++count[uav_of(a[i])];
        }
    }
    double uav = 0.0;
    for (int j = 0; j < m; ++j) {
        if (count[j] == 0) continue;
        const auto& u = s.uavs[j];
        if (count[j] > u.max_users || load[j] > effective_uav_capacity(u) * (1 + 1e-12)) return kInf;
        uav += u.s_coef * std::pow(load[j], u.w_exp) + u.propulsion_w;
    }
    return s.params.weight_ue * ue + s.params.weight_uav * uav;
}

AssociationResult solve_association(const Scenario& s, const Solution& prev,
                                    const AssociationOptions& opts) {
    const int n = s.num_ues();
    const int m = s.num_uavs();
    const auto& prm = s.params;
    const auto cand = build_candidates(s, prev);
    const auto caps = uav_caps(s);

    AssociationResult out;
    out.solution = prev;
    out.objective = evaluate_objective(s, prev);
    const double prev_value = assignment_objective(s, cand, prev.assoc);
    Assignment best = prev.assoc;
    double best_value = prev_value;

    Assignment anchor = prev.assoc;
    for (int round = 0; round < opts.max_outer; ++round) {
        ++out.outer_iterations;
        const auto weights = update_weights(counts_of(anchor, m), prm.reweight_tau, round);
        const auto anchor_load = loads_of(anchor, cand, m);

        DualState duals;
        duals.beta.assign(n, 0.0);
        duals.gamma.assign(n, 0.0);
        duals.lambda.assign(m, 0.0);
        for (int j = 0; j < m; ++j) {
            const auto& u = s.uavs[j];
            duals.mu.push_back(prm.weight_uav * u.w_exp * u.s_coef *
                               std::pow(anchor_load[j], u.w_exp - 1.0));
        }
        // Price scale for normalised steps: the mean cheapest candidate cost.
        double price = 0.0;
        {
            const auto h = cost_matrix(s, cand, weights, duals);
            for (const auto& row : h) price += *std::min_element(row.begin(), row.end());
            price = std::max(price / n, 1e-12);
        }

        Assignment round_best = anchor;
        double round_value = surrogate_objective(s, cand, anchor, weights);
        std::vector<double> trace;
        Assignment last;
        int stable = 0;
        for (int t = 1; t <= opts.max_inner; ++t) {
            ++out.inner_iterations;
            const auto inner = dual_inner_solve(s, cand, weights, duals);
            stable = inner.assoc == last ? stable + 1 : 0;
            last = inner.assoc;

            const auto h = cost_matrix(s, cand, weights, duals);
            if (auto rec = recover_primal(s, cand, h, caps)) {
                const double sv = surrogate_objective(s, cand, *rec, weights);
                if (sv < round_value) round_value = sv, round_best = *rec;
                const double tv = assignment_objective(s, cand, *rec);
                if (tv < best_value) best_value = tv, best = *rec;
            }
            trace.push_back(round_value);

            const auto res = dual_residuals(s, cand, inner);
            const bool counts_ok =
                std::all_of(res.count.begin(), res.count.end(), [](double v) { return v <= 0.0; });
            if (stable >= opts.stable_inner && counts_ok) break;

            const double phi = prm.subgrad_step_init / std::sqrt(static_cast<double>(t));
            DualSteps st;
            for (int i = 0; i < n; ++i) {
                st.beta.push_back(phi * price / s.latency_s);
                st.gamma.push_back(phi * price / s.ues[i].p_max_w);
            }
            for (int j = 0; j < m; ++j) {
                st.lambda.push_back(phi * price / s.uavs[j].max_users);
                st.mu.push_back(phi * price / (caps[j] * caps[j]));
            }
            duals = multiplier_update(duals, res, st);
        }
        out.surrogate_trace.push_back(std::move(trace));
        if (round_best == anchor) break;
        anchor = round_best;
    }

    if (opts.local_search) local_search(s, cand, best, best_value);

    if (best_value < prev_value && best != prev.assoc) {
        Solution next = prev;
        for (int i = 0; i < n; ++i) {
            if (best[i] == prev.assoc[i]) continue;
            next.assoc[i] = best[i];
            next.f_hz[i] = cand[i][best[i]].f_hz;
            next.p_w[i] = best[i] == kLocal ? 0.0 : cand[i][best[i]].p_w;
        }
        const double v = evaluate_objective(s, next);
        if (v < out.objective) {
            out.solution = std::move(next);
            out.objective = v;
            out.changed = true;
        }
    }
    return out;
}

}  // namespace uavmec
