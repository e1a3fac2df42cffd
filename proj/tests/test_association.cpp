#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "uavmec/association.hpp"
#include "uavmec/errors.hpp"
#include "uavmec/fcm.hpp"
#include "uavmec/feasibility_math.hpp"
#include "uavmec/objective.hpp"

using namespace uavmec;

namespace {

DualState zero_duals(int n, int m) {
    DualState d;
    d.beta.assign(n, 0);
    d.gamma.assign(n, 0);
    d.lambda.assign(m, 0);
    d.mu.assign(m, 0);
    return d;
}

ReweightState flat_weights(int m, double delta) {
    ReweightState w;
    w.delta.assign(m, delta);
    w.rho.assign(m, 0);
    return w;
}

// Every assignment of n UEs to {local, 1..m}, scored by the candidate table.
double enumerate_best(const Scenario& s, const CandidateTable& cand) {
    const int n = s.num_ues(), m = s.num_uavs();
    long total = 1;
    for (int i = 0; i < n; ++i) total *= m + 1;
    double best = INFINITY;
    for (long code = 0; code < total; ++code) {
        Assignment a(n);
        long c = code;
        for (int i = 0; i < n; ++i, c /= m + 1) a[i] = static_cast<int>(c % (m + 1));
        best = std::min(best, assignment_objective(s, cand, a));
    }
    return best;
}

}  // namespace

TEST_CASE("reweighting at zero load") {
    const auto w = update_weights({0.0}, 1e-3, 0);
    CHECK(w.delta[0] == doctest::Approx(1.0 / (1e-3 * std::log(1001.0))).epsilon(1e-12));
    CHECK(w.delta[0] == doctest::Approx(144.74).epsilon(1e-4));
    CHECK(w.rho[0] == 0.0);
    for (double tau : {1e-6, 0.01, 1.0, 50.0}) CHECK(update_weights({0.0}, tau, 3).rho[0] == 0.0);
}

TEST_CASE("reweighting reproduces the log penalty at the anchor") {
    const auto w = update_weights({1.0}, 1e-3, 1);
    CHECK(std::abs(w.delta[0] + w.rho[0] - 1.0) <= 1e-9);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> X(0, 40), LT(-6, 1);
    for (int k = 0; k < 1000; ++k) {
        const double x = std::floor(X(rng)), tau = std::pow(10.0, LT(rng));
        const auto r = update_weights({x}, tau, k);
        const double target = std::log(1 + x / tau) / std::log(1 + 1 / tau);
        CHECK(r.delta[0] > 0);
        CHECK(r.rho[0] >= 0);
        CHECK(std::abs(r.delta[0] * x + r.rho[0] - target) <= 1e-9 * std::max(1.0, target));
    }
}

TEST_CASE("candidate cost without multipliers") {
    auto s = fixture::offload(1, 2, 4, 0);
    const auto d = zero_duals(1, 2);
    Candidate off{true, 2e7, 0.01, 1.0};
    CHECK(candidate_cost_h(s, 0, 1, off, flat_weights(2, 0), d) == doctest::Approx(10 * 0.01));
    CHECK(candidate_cost_h(s, 0, 1, off, flat_weights(2, 0.5), d) == doctest::Approx(0.1 + 50));
    Candidate local{true, 1e7, 1e-28 * 1e21, 1.0};
    CHECK(candidate_cost_h(s, 0, 0, local, flat_weights(2, 0.5), d) == doctest::Approx(10 * 1e-7));
    // Identical UAVs price identically.
    CHECK(candidate_cost_h(s, 0, 1, off, flat_weights(2, 0.3), d) ==
          candidate_cost_h(s, 0, 2, off, flat_weights(2, 0.3), d));
}

TEST_CASE("candidate cost with multipliers") {
    auto s = fixture::offload(1, 1, 4, 0);
    DualState d = zero_duals(1, 1);
    d.beta[0] = 2, d.gamma[0] = 3, d.lambda[0] = 4, d.mu[0] = -1e-7;
    Candidate off{true, 2e7, 0.01, 0.9};
    const double want = 10 * 0.01 + 1 * 100 * 0.25 + 2 * 0.9 + 3 * 0.01 + 4 - 1e-7 * 2e7;
    CHECK(candidate_cost_h(s, 0, 1, off, flat_weights(1, 0.25), d) == doctest::Approx(want));
    Candidate local{true, 1e7, 1e-7, 1.0};
    CHECK(candidate_cost_h(s, 0, 0, local, flat_weights(1, 0.25), d) ==
          doctest::Approx(10 * 1e-7 + 2 * 1.0 + 3 * 1e-7));
}

TEST_CASE("inner solve picks the cheapest allowed choice, lowest index on ties") {
    auto s = fixture::offload(2, 2, 4, 0);
    CandidateTable cand(2, std::vector<Candidate>(3));
    // Costs 10 p with zero duals and delta: {5, 3} for UE 0, a tie for UE 1.
    cand[0][1] = {true, 1e7, 0.5, 1};
    cand[0][2] = {true, 1e7, 0.3, 1};
    cand[1][1] = {true, 1e7, 0.2, 1};
    cand[1][2] = {true, 1e7, 0.2, 1};
    const auto r = dual_inner_solve(s, cand, flat_weights(2, 0), zero_duals(2, 2));
    CHECK(r.assoc == Assignment{2, 1});
    CHECK(r.aux_f_hz == std::vector<double>{0.0, 0.0});  // mu = 0 clamps to zero

    CandidateTable none(1, std::vector<Candidate>(3));
    auto one = fixture::offload(1, 2, 4, 0);
    try {
        dual_inner_solve(one, none, flat_weights(2, 0), zero_duals(1, 2));
        FAIL("expected NoFeasibleChoice");
    } catch (const NoFeasibleChoice& e) {
        CHECK(e.ues() == std::vector<int>{0});
    }
}

TEST_CASE("auxiliary capacity follows the multiplier and the battery cap") {
    auto s = fixture::offload(1, 1, 4, 0);
    CHECK(effective_uav_capacity(s.uavs[0]) == doctest::Approx(1e9));
    CandidateTable cand(1, std::vector<Candidate>(2));
    cand[0][1] = {true, 1e7, 0.1, 1};
    auto d = zero_duals(1, 1);
    d.mu[0] = 3e-28 * 1e16;  // W2 w s f^2 at f = 1e8
    CHECK(dual_inner_solve(s, cand, flat_weights(1, 0), d).aux_f_hz[0] == doctest::Approx(1e8));
    d.mu[0] = 1.0;  // far above the cap
    CHECK(dual_inner_solve(s, cand, flat_weights(1, 0), d).aux_f_hz[0] == doctest::Approx(1e9));
    d.mu[0] = -1.0;
    CHECK(dual_inner_solve(s, cand, flat_weights(1, 0), d).aux_f_hz[0] == 0.0);
}

TEST_CASE("multiplier step") {
    DualState d;
    d.beta = {1.0, 0.0};
    d.gamma = {0.0, 0.0};
    d.lambda = {0.0};
    d.mu = {0.0};
    DualResiduals r;
    r.latency = {2.0, -1.0};
    r.ue_power = {-0.5, -0.5};
    r.count = {-3.0};
    r.coupling = {-1.0};
    const auto u = multiplier_update(d, r, 0.1, 0.5);
    CHECK(u.beta[0] == doctest::Approx(1.2));
    CHECK(u.beta[1] == 0.0);
    CHECK(u.gamma == std::vector<double>{0.0, 0.0});
    CHECK(u.lambda[0] == 0.0);
    CHECK(u.mu[0] == doctest::Approx(-0.5));
}

TEST_CASE("single UE prefers local execution when it is cheaper") {
    auto s = fixture::defaults(1, 1, 2);
    s.ues[0].pos = {0, 0};
    Solution prev;
    prev.assoc = {1};
    prev.placement = {{0, 0, 10, s.uavs[0].theta_min_rad}};
    prev.f_hz = {2e7};
    prev.p_w = {0};
    const auto cand0 = build_candidates(s, prev);
    prev.p_w[0] = cand0[0][1].p_w;
    const auto cand = build_candidates(s, prev);
    const double off = assignment_objective(s, cand, {1});
    const double loc = assignment_objective(s, cand, {0});
    REQUIRE(loc < off);
    const auto r = solve_association(s, prev);
    CHECK(r.changed);
    CHECK(r.solution.assoc == Assignment{0});
    CHECK(r.objective == doctest::Approx(loc));
}

TEST_CASE("an optimal association is returned unchanged") {
    const auto s = fixture::defaults(6, 2, 5);
    const auto init = bootstrap(s);  // everyone local, no propulsion
    const auto r = solve_association(s, init);
    CHECK_FALSE(r.changed);
    CHECK(r.solution == init);
}

TEST_CASE("never worse than the previous association, and optimal on small instances") {
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto s = fixture::offload(4, 2, seed % 2 ? 8 : 10, seed);
        Solution prev;
        try {
            prev = bootstrap(s);
        } catch (const InfeasibleScenario&) {
            continue;
        }
        const auto cand = build_candidates(s, prev);
        const double before = evaluate_objective(s, prev);
        const auto r = solve_association(s, prev);
        CAPTURE(seed);
        CHECK(r.objective <= before);
        CHECK(check_feasibility(s, r.solution).feasible());
        CHECK(r.objective == doctest::Approx(evaluate_objective(s, r.solution)).epsilon(1e-12));
        const double oracle = enumerate_best(s, cand);
        CHECK(r.objective <= oracle * (1 + 1e-9));
        if (r.changed) {
            ++improved;
            CHECK(r.objective < before);
        }
        for (const auto& row : r.surrogate_trace)
            for (std::size_t t = 1; t < row.size(); ++t) CHECK(row[t] <= row[t - 1]);
    }
    CHECK(improved > 0);
}
