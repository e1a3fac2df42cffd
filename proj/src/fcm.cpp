#include "uavmec/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "uavmec/capacity.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/power.hpp"

namespace uavmec {

namespace {

double sq_dist3(const Vec2& c, const Vec2& p, double h) {
    const double dx = c.x - p.x;
    const double dy = c.y - p.y;
    return dx * dx + dy * dy + h * h;
}

std::vector<Vec2> seed_centroids(const std::vector<Vec2>& pts, std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec2> c;
    c.push_back(pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)]);
    std::vector<double> d2(pts.size());
    while (c.size() < k) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : c) best = std::min(best, sq_dist3(q, pts[i], 0.0));
            d2[i] = best;
        }
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (total > 0.0) {
            std::discrete_distribution<std::size_t> pick(d2.begin(), d2.end());
            c.push_back(pts[pick(rng)]);
        } else {
            c.push_back(pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)]);
        }
    }
    return c;
}

void update_membership(const std::vector<Vec2>& pts, const std::vector<double>& h_min,
                       FcmState& st) {
    const std::size_t k = st.centroids.size();
    const double e = 1.0 / (st.exponent - 1.0);
    std::vector<double> logw(k);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // a_ij proportional to d_ij^(-2/(m-1)); normalised in log space.
        for (std::size_t j = 0; j < k; ++j)
            logw[j] = -e * std::log(sq_dist3(st.centroids[j], pts[i], h_min[j]));
        const double top = *std::max_element(logw.begin(), logw.end());
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += (st.membership[i][j] = std::exp(logw[j] - top));
        for (std::size_t j = 0; j < k; ++j) st.membership[i][j] /= sum;
    }
}

void update_centroids(const std::vector<Vec2>& pts, FcmState& st) {
    for (std::size_t j = 0; j < st.centroids.size(); ++j) {
        double wx = 0.0, wy = 0.0, w = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double a = std::pow(st.membership[i][j], st.exponent);
            wx += a * pts[i].x;
            wy += a * pts[i].y;
            w += a;
        }
        if (w > 0.0) st.centroids[j] = {wx / w, wy / w};
    }
}

}  // namespace

LocalSplit classify_local_set(const Scenario& s) {
    LocalSplit out;
    for (int i = 0; i < s.num_ues(); ++i)
        (locally_feasible(s.ues[i], s.latency_s) ? out.local : out.offload).push_back(i);
    return out;
}

double fcm_objective(const std::vector<Vec2>& pts, const std::vector<double>& h_min,
                     const FcmState& st) {
    double v = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < st.centroids.size(); ++j)
            v += std::pow(st.membership[i][j], st.exponent) *
                 sq_dist3(st.centroids[j], pts[i], h_min[j]);
    return v;
}

FcmState fcm_iterate(const std::vector<Vec2>& pts, const std::vector<double>& h_min,
                     double exponent, std::uint64_t seed, int max_iter, double tol) {
    if (pts.empty()) throw Error("fcm_iterate needs at least one point");
    if (!(exponent > 1.0)) throw Error("fcm exponent must exceed 1");
    FcmState st;
    st.exponent = exponent;
    st.centroids = seed_centroids(pts, h_min.size(), seed);
    st.membership.assign(pts.size(), std::vector<double>(h_min.size(), 0.0));

    double prev = std::numeric_limits<double>::infinity();
    while (st.iterations < max_iter) {
        ++st.iterations;
        update_membership(pts, h_min, st);
        st.objective_trace.push_back(fcm_objective(pts, h_min, st));
        update_centroids(pts, st);
        const double v = fcm_objective(pts, h_min, st);
        st.objective_trace.push_back(v);
        if (h_min.size() == 1 || std::abs(prev - v) <= tol * std::abs(v)) break;
        prev = v;
    }
    // Leave memberships consistent with the final centroids.
    if (h_min.size() > 1) {
        update_membership(pts, h_min, st);
        st.objective_trace.push_back(fcm_objective(pts, h_min, st));
    }
    return st;
}

Solution bootstrap(const Scenario& s) { return bootstrap(s, s.params.rng_seed); }

Solution bootstrap(const Scenario& s, std::uint64_t seed) {
    const int n = s.num_ues();
    const int m = s.num_uavs();
    const double T = s.latency_s;
    const double B = s.params.bandwidth_hz;
    const auto dc = derive_constants(s.params);
    const auto split = classify_local_set(s);

    Solution sol;
    sol.assoc.assign(n, kLocal);
    sol.f_hz.assign(n, 0.0);
    sol.p_w.assign(n, 0.0);
    for (int i : split.local) sol.f_hz[i] = allocate_local(s.ues[i], T);

    std::vector<double> h_min;
    for (const auto& u : s.uavs) h_min.push_back(u.h_min_m);

    std::vector<Vec2> centroids;
    FcmState fcm;
    if (split.offload.empty()) {
        Vec2 mean;
        for (const auto& ue : s.ues) mean = {mean.x + ue.pos.x / n, mean.y + ue.pos.y / n};
        centroids.assign(m, mean);
    } else {
        std::vector<Vec2> pts;
        for (int i : split.offload) pts.push_back(s.ues[i].pos);
        fcm = fcm_iterate(pts, h_min, s.params.fcm_exponent, seed);
        centroids = fcm.centroids;
    }
    for (int j = 0; j < m; ++j)
        sol.placement.push_back({centroids[j].x, centroids[j].y, s.uavs[j].h_min_m,
                                 s.uavs[j].theta_min_rad});

    std::vector<double> used(m, 0.0);
    std::vector<int> count(m, 0);
    std::vector<UeRejection> rejected;
    for (std::size_t k = 0; k < split.offload.size(); ++k) {
        const int i = split.offload[k];
        const auto& ue = s.ues[i];
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return fcm.membership[k][a] > fcm.membership[k][b];
        });
        UeRejection why{i, {}};
        bool admitted = false;
        for (int j : order) {
            const auto& z = sol.placement[j];
            const auto& u = s.uavs[j];
            std::ostringstream os;
            os << "uav " << u.id << ": ";
            const double r = horizontal_distance(ue.pos, z.xy());
            if (count[j] >= u.max_users) {
                os << "user limit " << u.max_users << " reached";
            } else if (!is_covered(r, z.h_m, z.theta_rad)) {
                os << "outside coverage (R = " << r << " m > " << z.h_m * std::tan(z.theta_rad)
                   << " m)";
            } else {
                double f_min = 0.0;
                try {
                    f_min = min_offload_capacity(ue, z, T, dc.alpha, B);
                } catch (const DeadlineUnreachable& e) {
                    why.reasons.push_back(os.str() + e.what());
                    continue;
                }
                const double cap = effective_uav_capacity(u);
                if (used[j] + f_min > cap) {
                    os << "capacity headroom " << cap - used[j] << " Hz < f_min " << f_min << " Hz";
                } else {
                    used[j] += f_min;
                    ++count[j];
                    sol.assoc[i] = choice_of(j);
                    sol.f_hz[i] = f_min;
                    sol.p_w[i] = std::min(ue.p_max_w,
                                          optimal_uplink_power(ue, z, f_min, T, dc.alpha, B));
                    admitted = true;
                    break;
                }
            }
            why.reasons.push_back(os.str());
        }
        if (!admitted) rejected.push_back(std::move(why));
    }
    if (!rejected.empty()) {
        std::ostringstream os;
        os << rejected.size() << " UE(s) could not be admitted by any UAV:";
        for (const auto& r : rejected) os << ' ' << s.ues[r.ue_index].id;
        throw InfeasibleScenario(std::move(rejected), os.str());
    }
    return sol;
}

}  // namespace uavmec
