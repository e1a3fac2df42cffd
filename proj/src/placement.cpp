#include "uavmec/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/tools/minima.hpp>

#include "uavmec/errors.hpp"

namespace uavmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;
constexpr int kPenaltyRounds = 12;

// Minimum of a convex function of one variable on [lo, hi].
template <class F>
std::pair<double, double> line_min(F&& f, double lo, double hi) {
    if (!(hi > lo)) return {lo, f(lo)};
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::brent_find_minima(f, lo, hi, kBrentBits, iters);
    // Brent never probes the ends; convex minima often sit on them.
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo < r.second) r = {lo, f_lo};
    if (f_hi < r.second) r = {hi, f_hi};
    return r;
}

// Nested line searches: min_x min_y f(x, y). Exact for convex f because
// partial minimisation preserves convexity in x.
template <class F>
Vec2 plane_min(F&& f, const Vec2& lo, const Vec2& hi) {
    auto inner = [&](double x) {
        return line_min([&](double y) { return f(Vec2{x, y}); }, lo.y, hi.y);
    };
    const double x = line_min([&](double x) { return inner(x).second; }, lo.x, hi.x).first;
    return {x, inner(x).first};
}

// Geometry of the fixed-theta problem. For a horizontal position c the
// cheapest feasible altitude is max(H_min, max_i R_i / tan theta), which
// leaves a convex problem in c alone.
struct FixedTheta {
    const PlacementSubproblem& sub;
    double theta;
    double tan_theta;
    double weight_sum = 0.0;

    FixedTheta(const PlacementSubproblem& s, double t) : sub(s), theta(t), tan_theta(std::tan(t)) {
        for (double w : sub.weight) weight_sum += w;
    }

    double max_dist(const Vec2& c) const {
        double m = 0.0;
        for (const auto& u : sub.ue_pos) m = std::max(m, horizontal_distance(u, c));
        return m;
    }
    double altitude(const Vec2& c) const { return std::max(sub.h_min_m, max_dist(c) / tan_theta); }

    double objective(const Vec2& c) const {
        const double h = altitude(c);
        double sum = weight_sum * h * h;
        for (std::size_t i = 0; i < sub.ue_pos.size(); ++i) {
            const double dx = c.x - sub.ue_pos[i].x;
            const double dy = c.y - sub.ue_pos[i].y;
            sum += sub.weight[i] * (dx * dx + dy * dy);
        }
        return theta * theta * sum;
    }

    // Largest relative constraint excess; <= 0 iff c is feasible.
    double violation(const Vec2& c) const {
        const double d = max_dist(c);
        double v = d / (sub.h_max_m * tan_theta) - 1.0;
        if (!sub.path_budget.empty()) {
            const double h = std::max(sub.h_min_m, d / tan_theta);
            for (std::size_t i = 0; i < sub.ue_pos.size(); ++i) {
                const double b = sub.path_budget[i];
                if (!std::isfinite(b)) continue;
                const double r = horizontal_distance(sub.ue_pos[i], c);
                v = std::max(v, theta * theta * (h * h + r * r) / b - 1.0);
            }
        }
        return v;
    }
};

}  // namespace

PlacementSubproblem make_placement_subproblem(const UavProfile& uav, double theta_step_rad) {
    PlacementSubproblem sub;
    sub.h_min_m = uav.h_min_m;
    sub.h_max_m = uav.h_max_m;
    sub.theta_min_rad = uav.theta_min_rad;
    sub.theta_max_rad = uav.theta_max_rad;
    sub.theta_step_rad = theta_step_rad;
    return sub;
}

double placement_objective(double x_m, double y_m, double h_m, double theta_rad,
                           const PlacementSubproblem& sub) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sub.ue_pos.size(); ++i) {
        const double dx = x_m - sub.ue_pos[i].x;
        const double dy = y_m - sub.ue_pos[i].y;
        sum += sub.weight[i] * (h_m * h_m + dx * dx + dy * dy);
    }
    return theta_rad * theta_rad * sum;
}

double placement_objective(const UavPlacement& z, const PlacementSubproblem& sub) {
    return placement_objective(z.x_m, z.y_m, z.h_m, z.theta_rad, sub);
}

std::optional<UavPlacement> try_fixed_beamwidth(const PlacementSubproblem& sub, double theta_rad) {
    if (sub.ue_pos.empty()) throw PlacementInfeasible("placement needs at least one served UE");
    const FixedTheta g(sub, theta_rad);
    Vec2 lo = sub.ue_pos.front(), hi = lo;
    for (const auto& u : sub.ue_pos) {
        lo = {std::min(lo.x, u.x), std::min(lo.y, u.y)};
        hi = {std::max(hi.x, u.x), std::max(hi.y, u.y)};
    }
    auto finish = [&](const Vec2& c) {
        return UavPlacement{c.x, c.y, std::min(sub.h_max_m, g.altitude(c)), theta_rad};
    };

    Vec2 c = plane_min([&](const Vec2& p) { return g.objective(p); }, lo, hi);
    if (g.violation(c) <= 0.0) return finish(c);

    const Vec2 safe = plane_min([&](const Vec2& p) { return g.violation(p); }, lo, hi);
    const double v_safe = g.violation(safe);
    if (v_safe > 1e-12) return std::nullopt;

    // Exact penalty, escalated until the constrained optimum is reached.
    double rho = 10.0 * g.objective(safe);
    for (int k = 0; k < kPenaltyRounds && g.violation(c) > 0.0; ++k, rho *= 10.0) {
        c = plane_min(
            [&](const Vec2& p) { return g.objective(p) + rho * std::max(0.0, g.violation(p)); },
            lo, hi);
    }
    // Whatever residual excess is left, walk towards the safe point; the
    // violation is convex along the segment so bisection finds the exit.
    const double target = std::max(0.0, v_safe);
    if (g.violation(c) > target) {
        double t_lo = 0.0, t_hi = 1.0;
        for (int k = 0; k < 100; ++k) {
            const double t = 0.5 * (t_lo + t_hi);
            const Vec2 p{c.x + t * (safe.x - c.x), c.y + t * (safe.y - c.y)};
            (g.violation(p) > target ? t_lo : t_hi) = t;
        }
        c = {c.x + t_hi * (safe.x - c.x), c.y + t_hi * (safe.y - c.y)};
    }
    return finish(c);
}

UavPlacement solve_fixed_beamwidth(const PlacementSubproblem& sub, double theta_rad) {
    if (auto z = try_fixed_beamwidth(sub, theta_rad)) return *z;
    std::ostringstream os;
    os << "no placement covers all " << sub.ue_pos.size() << " served UEs at theta = " << theta_rad
       << " rad with H <= " << sub.h_max_m << " m";
    throw PlacementInfeasible(os.str());
}

std::vector<double> theta_grid(double theta_min, double theta_max, double step) {
    std::vector<double> grid;
    if (!(step > 0.0) || theta_max <= theta_min) return {theta_min};
    const auto count = static_cast<long>(std::floor((theta_max - theta_min) / step + 1e-9));
    for (long k = 0; k <= count; ++k) grid.push_back(theta_min + static_cast<double>(k) * step);
    if (theta_max - grid.back() <= 1e-9 * step)
        grid.back() = theta_max;
    else
        grid.push_back(theta_max);
    return grid;
}

PlacementResult optimize_placement(const PlacementSubproblem& sub) {
    PlacementResult best;
    best.objective = kInf;
    auto consider = [&](double theta) {
        const auto z = try_fixed_beamwidth(sub, theta);
        const double v = z ? placement_objective(*z, sub) : kInf;
        best.samples.push_back({theta, v});
        if (v < best.objective) {
            best.objective = v;
            best.z = *z;
        }
        return v;
    };
    for (double theta : theta_grid(sub.theta_min_rad, sub.theta_max_rad, sub.theta_step_rad))
        consider(theta);
    if (!std::isfinite(best.objective)) {
        std::ostringstream os;
        os << "no beamwidth in [" << sub.theta_min_rad << ", " << sub.theta_max_rad
           << "] covers the " << sub.ue_pos.size() << " served UEs";
        throw AllInfeasible(os.str());
    }
    if (sub.refine_theta && sub.theta_step_rad > 0.0) {
        const double lo = std::max(sub.theta_min_rad, best.z.theta_rad - sub.theta_step_rad);
        const double hi = std::min(sub.theta_max_rad, best.z.theta_rad + sub.theta_step_rad);
        line_min(
            [&](double t) {
                const double v = consider(t);
                return std::isfinite(v) ? v : std::numeric_limits<double>::max();
            },
            lo, hi);
    }
    return best;
}

}  // namespace uavmec
