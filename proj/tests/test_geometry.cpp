#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "uavmec/geometry.hpp"

using namespace uavmec;
using std::numbers::pi;

TEST_CASE("horizontal distance") {
    CHECK(horizontal_distance({0, 0}, {3, 4}) == 5.0);
    CHECK(horizontal_distance({2.5, -1}, {2.5, -1}) == 0.0);
    CHECK(horizontal_distance({1, 1}, {4, 5}) == 5.0);
    CHECK(horizontal_distance({4, 5}, {1, 1}) == horizontal_distance({1, 1}, {4, 5}));
}

TEST_CASE("antenna pattern") {
    CHECK(antenna_gain(0.1, 0.1, 1.0) == doctest::Approx(2.2846));
    CHECK(antenna_gain(1.5, 0.0, 1.0) == 0.0);
    const double t = 0.7;
    CHECK(antenna_gain(t, t, t) == doctest::Approx(2.2846 / (t * t)));
    CHECK(antenna_gain(t, t + 1e-9, t) == 0.0);
}

TEST_CASE("uplink rate") {
    const double a = 2.5769e10;
    CHECK(uplink_rate(0.0, pi / 6, 10, 0, a, 1e6) == 0.0);
    CHECK(uplink_rate(1.5820e-10, pi / 6, 10, 0, a, 1e6) == doctest::Approx(2.0e5).epsilon(1e-4));
    CHECK(uplink_rate(1.5820e-10, pi / 6, 10, 0, a, 1e6) ==
          doctest::Approx(static_cast<double>(oracle::rate(1.5820e-10L, pi / 6, 10, 0, a, 1e6)))
              .epsilon(1e-12));
    // doubling H^2 + R^2: H=10,R=10 versus H=10,R=0
    CHECK(uplink_rate(1e-9, pi / 6, 10, 10, a, 1e6) < uplink_rate(1e-9, pi / 6, 10, 0, a, 1e6));
}

TEST_CASE("coverage cone") {
    CHECK(is_covered(10.0, 10.0, pi / 4));
    CHECK_FALSE(is_covered(10.0001, 10.0, pi / 4));
    CHECK(is_covered(0.0, 3.0, 0.2));
}

TEST_CASE("properties over random draws") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> H(1, 100), R(0, 500), th(0.05, 1.5), P(1e-9, 1.0);
    const double a = 2.5769e10, B = 1e6;
    for (int k = 0; k < 2000; ++k) {
        const double h = H(rng), r = R(rng), t = th(rng), p = P(rng);
        // channel gain decreases in H and R
        CHECK(channel_gain(1.42e-4, h * 1.01, r) < channel_gain(1.42e-4, h, r));
        CHECK(channel_gain(1.42e-4, h, r + 0.5) < channel_gain(1.42e-4, h, r));
        // concavity of the rate in p
        const double dp = 1e-3 * p;
        const double second = (uplink_rate(p + dp, t, h, r, a, B) - 2 * uplink_rate(p, t, h, r, a, B) +
                               uplink_rate(p - dp, t, h, r, a, B)) /
                              (dp * dp);
        const double scale = uplink_rate(p, t, h, r, a, B) / (p * p);
        CHECK(second <= 1e-9 * std::max(1.0, scale));
        // coverage monotone in theta
        if (is_covered(r, h, t)) CHECK(is_covered(r, h, std::min(t + 0.05, 1.55)));
    }
}

TEST_CASE("path factor and bounds") {
    CHECK(path_factor(0.5, 3, 4, 2.0) == doctest::Approx(0.25 * 25 / 2.0));
    UavProfile u;
    CHECK(within_bounds({0, 0, 10, pi / 6}, u));
    CHECK(within_bounds({0, 0, 50, pi / 3}, u));
    CHECK_FALSE(within_bounds({0, 0, 9.9, pi / 6}, u));
    CHECK_FALSE(within_bounds({0, 0, 20, 1.2}, u));
}
