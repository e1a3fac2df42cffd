#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "uavmec/capacity.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/feasibility_math.hpp"

using namespace uavmec;
using std::numbers::pi;

namespace {

constexpr double kAlpha = 2.5769e10;
constexpr double kB = 1e6;

CapacityTerm make_term(double theta, double h, double r, double d, double f, double pmax, double T) {
    CapacityTerm t;
    t.path = path_factor(theta, h, r, kAlpha);
    t.data_bits = d;
    t.cpu_cycles = f;
    t.f_min_hz = min_offload_capacity(t.path, d, f, pmax, T, kB);
    return t;
}

CapacitySubproblem random_sub(std::mt19937_64& rng, int n, double cap_stretch) {
    std::uniform_real_distribution<double> U(0, 1);
    CapacitySubproblem sub;
    sub.latency_s = 0.5 + U(rng);
    sub.bandwidth_hz = kB;
    sub.weight_ue = 10;
    sub.weight_uav = 1;
    sub.s_coef = 1e-28;
    sub.w_exp = 3;
    double total_min = 0;
    for (int i = 0; i < n; ++i) {
        const double theta = pi / 6 + U(rng) * pi / 6;
        const double h = 10 + 40 * U(rng);
        const double r = U(rng) * h * std::tan(theta);
        sub.terms.push_back(make_term(theta, h, r, 1e4 + 1e6 * U(rng), 1e6 + 3e8 * U(rng),
                                      0.050118723362727230, sub.latency_s));
        total_min += sub.terms.back().f_min_hz;
    }
    sub.f_cap_hz = total_min * (1 + cap_stretch * U(rng));
    return sub;
}

std::vector<long double> as_ld(const std::vector<double>& v) { return {v.begin(), v.end()}; }

oracle::Cap to_oracle(const CapacitySubproblem& sub) {
    oracle::Cap c;
    for (const auto& t : sub.terms) {
        c.G.push_back(t.path);
        c.D.push_back(t.data_bits);
        c.F.push_back(t.cpu_cycles);
        c.fmin.push_back(t.f_min_hz);
    }
    c.T = sub.latency_s;
    c.B = sub.bandwidth_hz;
    c.W1 = sub.weight_ue;
    c.W2 = sub.weight_uav;
    c.s = sub.s_coef;
    c.w = sub.w_exp;
    c.cap = sub.f_cap_hz;
    return c;
}

}  // namespace

TEST_CASE("minimum offload capacity at the reference point") {
    UeProfile ue;
    const double f = min_offload_capacity(ue, {0, 0, 10, pi / 6}, 1.0, kAlpha, kB);
    CHECK(f == doctest::Approx(1.00394e7).epsilon(1e-5));
    CHECK(f == doctest::Approx(static_cast<double>(oracle::f_min(1e5, 1e7, 1, 0.050118723362727230,
                                                                 pi / 6, 10, 0, kAlpha, kB)))
                   .epsilon(1e-12));
    CHECK(path_factor(pi / 6, 10, 0, kAlpha) == doctest::Approx(1.0639e-9).epsilon(1e-4));
    ue.data_bits = 0;
    CHECK(min_offload_capacity(ue, {0, 0, 10, pi / 6}, 1.0, kAlpha, kB) == 1e7);
    ue.data_bits = 1e9;
    CHECK_THROWS_AS(min_offload_capacity(ue, {0, 0, 10, pi / 6}, 1.0, kAlpha, kB),
                    DeadlineUnreachable);
}

TEST_CASE("marginal cost is increasing, negative, and inverts") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 500; ++k) {
        auto sub = random_sub(rng, 1, 1.0);
        const auto& t = sub.terms[0];
        const double T = sub.latency_s;
        const double f1 = t.f_min_hz * (1 + 2 * U(rng));
        const double f2 = f1 * (1 + 0.5 * U(rng) + 1e-6);
        const double h1 = marginal_cost_h(f1, t, T, kB, 10);
        CHECK(h1 < 0);
        CHECK(h1 < marginal_cost_h(f2, t, T, kB, 10));
        const double back = clamped_inverse(h1, t, T, kB, 10, 1e-12);
        CHECK(back == doctest::Approx(f1).epsilon(1e-10));
    }
    const auto t = make_term(pi / 6, 10, 0, 1e5, 1e7, 0.05, 1.0);
    CHECK(marginal_cost_h(1e15, t, 1.0, kB, 10) > -1e-20);
    CHECK_THROWS_AS(invert_h(-1e30, t, 1.0, kB, 10, 2e7, 3e7, 1e-10), BracketError);
}

TEST_CASE("single UE matches a million-point scan") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 5; ++k) {
        const auto sub = random_sub(rng, 1, 2.0);
        const auto res = allocate_capacity_uav(sub);
        const auto oc = to_oracle(sub);
        const double lo = sub.terms[0].f_min_hz, hi = sub.f_cap_hz;
        long double best = INFINITY;
        double best_f = lo;
        const int n = 1000000;
        for (int g = 0; g <= n; ++g) {
            const double f = lo + (hi - lo) * g / n;
            const long double v = oracle::cap_objective(oc, {f});
            if (v < best) best = v, best_f = f;
        }
        const long double mine = oracle::cap_objective(oc, as_ld(res.f_hz));
        CHECK(mine <= best * (1 + 1e-10L));
        CHECK(std::abs(res.f_hz[0] - best_f) <= 2 * (hi - lo) / n);
    }
}

TEST_CASE("identical UEs get identical capacity") {
    const auto t = make_term(pi / 5, 20, 5, 2e5, 3e7, 0.05, 1.0);
    CapacitySubproblem sub;
    sub.terms = {t, t};
    sub.s_coef = 1e-28;
    sub.weight_ue = 10;
    for (double cap : {2.0 * t.f_min_hz * 1.001, 1e9}) {
        sub.f_cap_hz = cap;
        const auto r = allocate_capacity_uav(sub);
        CHECK(r.f_hz[0] == doctest::Approx(r.f_hz[1]).epsilon(1e-9));
    }
}

TEST_CASE("zero slack forces the lower bounds; overload throws") {
    const auto a = make_term(pi / 5, 20, 5, 2e5, 3e7, 0.05, 1.0);
    const auto b = make_term(pi / 4, 30, 1, 1e5, 1e8, 0.05, 1.0);
    CapacitySubproblem sub;
    sub.terms = {a, b};
    sub.s_coef = 1e-28;
    sub.f_cap_hz = a.f_min_hz + b.f_min_hz;
    const auto r = allocate_capacity_uav(sub);
    CHECK(r.f_hz[0] == a.f_min_hz);
    CHECK(r.f_hz[1] == b.f_min_hz);
    sub.f_cap_hz *= 0.99;
    try {
        allocate_capacity_uav(sub);
        FAIL("expected CapacityInfeasible");
    } catch (const CapacityInfeasible& e) {
        CHECK(e.overload_hz() == doctest::Approx(0.01 * (a.f_min_hz + b.f_min_hz)));
    }
}

TEST_CASE("KKT stationarity, slackness and bounds on random subproblems") {
    std::mt19937_64 rng(23);
    int binding = 0, slack = 0;
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + k % 3;
        auto sub = random_sub(rng, n, k % 2 ? 0.3 : 30.0);
        const auto r = allocate_capacity_uav(sub);
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            REQUIRE(r.f_hz[i] >= sub.terms[i].f_min_hz);
            sum += r.f_hz[i];
        }
        REQUIRE(sum <= sub.f_cap_hz * (1 + sub.eps_multiplier));
        const double tau = r.cap_binding ? r.cap_multiplier : 0.0;
        (r.cap_binding ? binding : slack)++;
        if (tau > 0) CHECK(std::abs(sum - sub.f_cap_hz) / sub.f_cap_hz <= 1e-8);
        const double c = sub.weight_uav * sub.s_coef * sub.w_exp * std::pow(sum, sub.w_exp - 1);
        for (int i = 0; i < n; ++i) {
            if (r.f_hz[i] <= sub.terms[i].f_min_hz * (1 + 1e-9)) continue;
            const double h = marginal_cost_h(r.f_hz[i], sub.terms[i], sub.latency_s, kB, 10);
            CHECK(std::abs(h + c + tau) <= 1e-6 * std::abs(h));
        }
    }
    CHECK(binding > 0);
    CHECK(slack > 0);
}

TEST_CASE("objective is convex along random chords") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 300; ++k) {
        const auto sub = random_sub(rng, 3, 2.0);
        std::vector<double> x(3), y(3), z(3);
        for (int i = 0; i < 3; ++i) {
            x[i] = sub.terms[i].f_min_hz * (1 + U(rng));
            y[i] = sub.terms[i].f_min_hz * (1 + U(rng));
        }
        const double l = U(rng);
        for (int i = 0; i < 3; ++i) z[i] = l * x[i] + (1 - l) * y[i];
        const double fx = capacity_objective(sub, x), fy = capacity_objective(sub, y);
        CHECK(capacity_objective(sub, z) <= l * fx + (1 - l) * fy + 1e-9 * std::max(fx, fy));
    }
}

TEST_CASE("two UEs agree with a refined 2-D grid") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 20; ++k) {
        const auto sub = random_sub(rng, 2, k % 2 ? 0.5 : 20.0);
        const auto oc = to_oracle(sub);
        const auto r = allocate_capacity_uav(sub);
        const long double mine = oracle::cap_objective(oc, as_ld(r.f_hz));
        double lo0 = sub.terms[0].f_min_hz, hi0 = sub.f_cap_hz - sub.terms[1].f_min_hz;
        double lo1 = sub.terms[1].f_min_hz, hi1 = sub.f_cap_hz - sub.terms[0].f_min_hz;
        long double best = INFINITY;
        double b0 = lo0, b1 = lo1;
        for (int pass = 0; pass < 4; ++pass) {
            const int g = 300;
            for (int a = 0; a <= g; ++a) {
                const double f0 = lo0 + (hi0 - lo0) * a / g;
                for (int b = 0; b <= g; ++b) {
                    const double f1 = lo1 + (hi1 - lo1) * b / g;
                    if (f1 < sub.terms[1].f_min_hz || f0 + f1 > sub.f_cap_hz) continue;
                    const long double v = oracle::cap_objective(oc, {f0, f1});
                    if (v < best) best = v, b0 = f0, b1 = f1;
                }
            }
            const double w0 = 2 * (hi0 - lo0) / g, w1 = 2 * (hi1 - lo1) / g;
            lo0 = std::max(sub.terms[0].f_min_hz, b0 - w0), hi0 = b0 + w0;
            lo1 = std::max(sub.terms[1].f_min_hz, b1 - w1), hi1 = b1 + w1;
        }
        CHECK(mine <= best * (1 + 1e-9L));
        CHECK(static_cast<double>((best - mine) / best) <= 1e-4);
    }
}

TEST_CASE("local capacity") {
    UeProfile ue;
    CHECK(allocate_local(ue, 1.0) == 1e7);
    ue.cpu_cycles = 2e8;
    CHECK_THROWS_AS(allocate_local(ue, 1.0), LocalInfeasible);
}
