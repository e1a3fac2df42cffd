#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "uavmec/errors.hpp"
#include "uavmec/placement.hpp"

using namespace uavmec;
using std::numbers::pi;

namespace {

PlacementSubproblem base_sub() {
    PlacementSubproblem s;
    s.h_min_m = 10;
    s.h_max_m = 50;
    s.theta_min_rad = pi / 6;
    s.theta_max_rad = pi / 3;
    s.theta_step_rad = pi / 90;
    return s;
}

bool covers(const PlacementSubproblem& s, double x, double y, double h, double t) {
    for (const auto& u : s.ue_pos)
        if (std::hypot(u.x - x, u.y - y) > h * std::tan(t) * (1 + 1e-12)) return false;
    return true;
}

// Brute force over (X, Y, H) at a fixed theta, refined by repeated zooming.
double grid_oracle(const PlacementSubproblem& s, double theta) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& u : s.ue_pos) {
        x0 = std::min(x0, u.x), x1 = std::max(x1, u.x);
        y0 = std::min(y0, u.y), y1 = std::max(y1, u.y);
    }
    double h0 = s.h_min_m, h1 = s.h_max_m;
    double best = INFINITY, bx = x0, by = y0, bh = h0;
    const int g = 40;
    for (int pass = 0; pass < 6; ++pass) {
        for (int a = 0; a <= g; ++a)
            for (int b = 0; b <= g; ++b)
                for (int c = 0; c <= g; ++c) {
                    const double x = x0 + (x1 - x0) * a / g, y = y0 + (y1 - y0) * b / g;
                    const double h = h0 + (h1 - h0) * c / g;
                    if (!covers(s, x, y, h, theta)) continue;
                    const double v = placement_objective(x, y, h, theta, s);
                    if (v < best) best = v, bx = x, by = y, bh = h;
                }
        const double wx = 2 * (x1 - x0) / g, wy = 2 * (y1 - y0) / g, wh = 2 * (h1 - h0) / g;
        x0 = bx - wx, x1 = bx + wx, y0 = by - wy, y1 = by + wy;
        h0 = std::max(s.h_min_m, bh - wh), h1 = std::min(s.h_max_m, bh + wh);
    }
    return best;
}

}  // namespace

TEST_CASE("objective evaluation") {
    auto s = base_sub();
    s.ue_pos = {{0, 0}};
    s.weight = {1};
    CHECK(placement_objective(0, 0, 7, 1.0, s) == doctest::Approx(49));
    s.ue_pos = {{1, 2}, {-3, 4}};
    s.weight = {0.5, 2};
    const double v = placement_objective(0.3, 0.2, 12, 0.4, s);
    CHECK(placement_objective(0.3, 0.2, 12, 0.8, s) == doctest::Approx(4 * v));
    auto t = s;
    for (auto& u : t.ue_pos) u.x += 5, u.y += 5;
    CHECK(placement_objective(5.3, 5.2, 12, 0.4, t) == doctest::Approx(v));
}

TEST_CASE("single UE sits directly above at the lowest altitude and beamwidth") {
    auto s = base_sub();
    s.ue_pos = {{123.4, -56.7}};
    s.weight = {2.0};
    const auto z = solve_fixed_beamwidth(s, pi / 4);
    CHECK(z.x_m == doctest::Approx(123.4));
    CHECK(z.y_m == doctest::Approx(-56.7));
    CHECK(z.h_m == 10.0);
    const auto r = optimize_placement(s);
    CHECK(r.z.theta_rad == doctest::Approx(pi / 6));
    CHECK(r.z.h_m == 10.0);
}

TEST_CASE("symmetric pair centres the UAV") {
    auto s = base_sub();
    for (double d : {1.0, 5.0, 20.0}) {
        s.ue_pos = {{-d, 0}, {d, 0}};
        s.weight = {1, 1};
        const auto z = solve_fixed_beamwidth(s, pi / 4);
        CHECK(std::abs(z.x_m) <= 1e-6 * d);
        CHECK(std::abs(z.y_m) <= 1e-6 * d);
        CHECK(covers(s, z.x_m, z.y_m, z.h_m, z.theta_rad));
    }
}

TEST_CASE("wide spread forces the widest beam") {
    auto s = base_sub();
    // radius 85 needs tan(theta) >= 1.7 at H = 50; only pi/3 (1.732) works
    s.ue_pos = {{-85, 0}, {85, 0}, {0, 5}};
    s.weight = {1, 1, 1};
    const auto r = optimize_placement(s);
    CHECK(r.z.theta_rad == doctest::Approx(pi / 3));
    CHECK(covers(s, r.z.x_m, r.z.y_m, r.z.h_m, r.z.theta_rad));
    CHECK_THROWS_AS(solve_fixed_beamwidth(s, pi / 4), PlacementInfeasible);
    s.ue_pos = {{-100, 0}, {100, 0}};
    s.weight = {1, 1};
    CHECK_THROWS_AS(optimize_placement(s), AllInfeasible);
}

TEST_CASE("theta grid covers both ends") {
    const auto g = theta_grid(pi / 6, pi / 3, pi / 90);
    CHECK(g.size() == 16);
    CHECK(g.front() == pi / 6);
    CHECK(g.back() == pi / 3);
    const auto h = theta_grid(0.5, 0.72, 0.1);
    REQUIRE(h.size() == 4);
    CHECK(h.back() == 0.72);
}

TEST_CASE("fixed-theta solver matches the 3-D grid on random 3-UE instances") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 10; ++k) {
        auto s = base_sub();
        for (int i = 0; i < 3; ++i) {
            s.ue_pos.push_back({40 * U(rng), 40 * U(rng)});
            s.weight.push_back(0.1 + U(rng));
        }
        const double theta = pi / 6 + U(rng) * pi / 6;
        const auto z = try_fixed_beamwidth(s, theta);
        const double oracle = grid_oracle(s, theta);
        if (!z) {
            CHECK(std::isinf(oracle));
            continue;
        }
        const double mine = placement_objective(*z, s);
        CHECK(mine <= oracle * (1 + 1e-9));
        CHECK((oracle - mine) / oracle <= 1e-3);
    }
}

TEST_CASE("returned placements are feasible and beat random feasible points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 20; ++k) {
        auto s = base_sub();
        for (int i = 0; i < 4; ++i) {
            s.ue_pos.push_back({30 * U(rng), 30 * U(rng)});
            s.weight.push_back(U(rng));
        }
        const auto r = optimize_placement(s);
        CHECK(r.z.h_m >= s.h_min_m);
        CHECK(r.z.h_m <= s.h_max_m);
        CHECK(r.z.theta_rad >= s.theta_min_rad);
        CHECK(r.z.theta_rad <= s.theta_max_rad);
        for (const auto& u : s.ue_pos)
            CHECK(std::hypot(u.x - r.z.x_m, u.y - r.z.y_m) <=
                  r.z.h_m * std::tan(r.z.theta_rad) + 1e-9);
        for (const auto& smp : r.samples) CHECK(r.objective <= smp.objective);
        int tried = 0;
        while (tried < 1000) {
            const double x = 30 * U(rng), y = 30 * U(rng);
            const double h = s.h_min_m + (s.h_max_m - s.h_min_m) * U(rng);
            const double t = s.theta_min_rad + (s.theta_max_rad - s.theta_min_rad) * U(rng);
            if (!covers(s, x, y, h, t)) continue;
            ++tried;
            REQUIRE(r.objective <= placement_objective(x, y, h, t, s) * (1 + 1e-12));
        }
    }
}

TEST_CASE("power budgets are respected") {
    auto s = base_sub();
    s.ue_pos = {{0, 0}, {30, 0}};
    s.weight = {100, 1};
    const auto free = solve_fixed_beamwidth(s, pi / 3);
    const double need = std::pow(pi / 3, 2) * (free.h_m * free.h_m + std::pow(30 - free.x_m, 2));
    s.path_budget = {INFINITY, 0.8 * need};
    const auto z = solve_fixed_beamwidth(s, pi / 3);
    const double used = std::pow(pi / 3, 2) * (z.h_m * z.h_m + std::pow(30 - z.x_m, 2));
    CHECK(used <= 0.8 * need * (1 + 1e-12));
    CHECK(placement_objective(z, s) >= placement_objective(free, s));
    s.path_budget = {INFINITY, 1e-6};
    CHECK_FALSE(try_fixed_beamwidth(s, pi / 3).has_value());
}
