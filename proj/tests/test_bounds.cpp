#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xi/bounds.hpp"
#include "xi/errors.hpp"

using namespace xi;

namespace {
constexpr double kPi = std::numbers::pi;
const double kLog2Sq = std::log(2.0) * std::log(2.0);
}  // namespace

TEST_CASE("wedge exponents") {
    CHECK(wedge_exponent(0.0) == 2.0);
    CHECK(wedge_exponent(kPi) == 4.0);
    CHECK(wedge_exponent(kPi / 2) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(wedge_exponent(2 * kPi), ValidationError);
    CHECK_THROWS_AS(wedge_exponent(-0.1), ValidationError);
    double prev = 0;
    for (int i = 0; i < 1000; ++i) {
        const double a = 2 * kPi * i / 1000.0;
        const double w = wedge_exponent(a), p = pivot_upper_bound(a);
        CHECK(w > prev);
        CHECK(p < w);
        prev = w;
    }
}

TEST_CASE("n-fold exponents") {
    CHECK(nfold_exact(1) == 1.25);
    CHECK(nfold_exact(2) == 2.5);
    CHECK(nfold_exact(4) == 5.0);
    CHECK_THROWS_AS(nfold_exact(0), ValidationError);
}

TEST_CASE("weak-pivot conjecture") {
    CHECK(weak_pivot_conjecture(0.0) == 1.25);
    CHECK(weak_pivot_conjecture(kPi / 2) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    // the rotation carried by 4+3i; the tabulated value is printed to six decimals
    const double v = weak_pivot_conjecture(std::atan2(3.0, 4.0));
    CHECK(v == doctest::Approx((5 * kPi / 2) / (2 * kPi - std::atan(0.75))).epsilon(1e-15));
    CHECK(std::abs(v - 1.392679) < 1e-4);
    CHECK(weak_pivot_conjecture_tagged(1.0).status == Status::Conjecture);
    CHECK(to_string(Status::Conjecture) == "conjecture");
    CHECK_THROWS_AS(weak_pivot_conjecture(kPi + 0.01), ValidationError);
}

TEST_CASE("pivot upper bound") {
    CHECK(pivot_upper_bound(0.0) == doctest::Approx(2.0 * (1 - kLog2Sq / (4 * kPi * kPi))).epsilon(1e-15));
    CHECK(pivot_upper_bound(0.0) == doctest::Approx(1.97566).epsilon(1e-6));
    CHECK(pivot_upper_bound(0.0) < 2.0);
    const double th = pivot_existence_threshold();
    CHECK(th == doctest::Approx(kLog2Sq / (2 * kPi)).epsilon(1e-15));
    CHECK(th == doctest::Approx(0.07647).epsilon(1e-4));
    // the bound crosses 2 near the threshold
    CHECK(pivot_upper_bound(0.99 * th) < 2.0);
    CHECK(pivot_upper_bound(1.5 * th) > 2.0);
    CHECK_THROWS_AS(pivot_upper_bound(7.0), ValidationError);
}

TEST_CASE("strip family optimum matches the pivot bound") {
    CHECK(optimize_gamma(kPi) == doctest::Approx(kPi * kPi / std::log(2.0)).epsilon(1e-15));
    CHECK(std::abs(strip_family_bound(kPi, optimize_gamma(kPi)) - pivot_upper_bound(0.0)) <= 1e-12);
    // beta grid (0, pi] built as (2pi - alpha) / 2 so both sides see the same rounded width
    for (int i = 0; i < 100; ++i) {
        const double alpha = 2 * kPi * i / 100.0;
        const double beta = (2 * kPi - alpha) / 2;
        CHECK(std::abs(strip_family_bound(beta, optimize_gamma(beta)) - pivot_upper_bound(alpha)) <= 1e-12);
        CHECK(strip_width_for_angle(alpha) == doctest::Approx(beta).epsilon(1e-14));
    }
    // gamma -> infinity removes the branching gain
    CHECK(strip_family_bound(2.0, 1e12) == doctest::Approx(kPi).epsilon(1e-10));
    CHECK_THROWS_AS(strip_family_bound(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(strip_family_bound(1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(optimize_gamma(0.0), ValidationError);
}

TEST_CASE("optimize_gamma is the argmin with quadratic local behaviour") {
    for (double beta : {0.3, 1.0, 2.0, kPi}) {
        const double g0 = optimize_gamma(beta), f0 = strip_family_bound(beta, g0);
        double best = g0, fbest = f0;
        for (int k = -2000; k <= 2000; ++k) {
            const double g = g0 * (1.0 + k / 4000.0);
            const double f = strip_family_bound(beta, g);
            if (f < fbest) {
                fbest = f;
                best = g;
            }
        }
        CHECK(best == g0);
        // second differences: f(g0 +- h) - f0 ~ c h^2
        const double h1 = 1e-2 * g0, h2 = 2e-2 * g0;
        const double d1 = strip_family_bound(beta, g0 + h1) - f0, d2 = strip_family_bound(beta, g0 + h2) - f0;
        CHECK(d1 > 0);
        CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("strip crossing lower bound") {
    StripSpec s{1.3, 0.0, 1.0, 1.3 / kPi};
    CHECK(strip_crossing_lower_bound(s) == doctest::Approx(std::exp(-1.0) / kPi).epsilon(1e-14));
    CHECK(strip_crossing_lower_bound(s) == doctest::Approx(0.11709966304863834).epsilon(1e-14));
    s.half_length = 1e-12;
    CHECK(strip_crossing_lower_bound(s) == doctest::Approx(1.0 / kPi).epsilon(1e-10));
    // M = 1 doubles the exponent: the log of the exponential factor doubles
    StripSpec a{2.0, 0.0, 1.0, 0.7}, b{2.0, 1.0, 1.0, 0.7};
    const double la = std::log(strip_crossing_lower_bound(a) * kPi);
    const double lb = std::log(strip_crossing_lower_bound(b) * kPi);
    CHECK(lb / la == doctest::Approx(2.0).epsilon(1e-14));
    StripSpec bad{0.0, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(strip_crossing_lower_bound(bad), ValidationError);
    bad = {1.0, -1.0, 1.0, 1.0};
    CHECK_THROWS_AS(strip_crossing_lower_bound(bad), ValidationError);
}

namespace {
template <class F1, class F2>
SampledStrip sample(double length, std::size_t n, F1&& f1, F2&& f2) {
    SampledStrip s;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = length * static_cast<double>(i) / static_cast<double>(n);
        s.grid.push_back(t);
        s.lower.push_back(f1(t));
        s.upper.push_back(f2(t));
    }
    return s;
}
}  // namespace

TEST_CASE("extremal distance of a rectangle and a tilted strip") {
    const auto rect = sample(5.0, 10, [](double) { return 0.0; }, [](double) { return 2.0; });
    const auto r = extremal_distance_bounds(rect, 0.0);
    CHECK(r.lower == doctest::Approx(2.5).epsilon(1e-14));
    REQUIRE(r.upper.has_value());
    CHECK(*r.upper == doctest::Approx(2.5).epsilon(1e-14));

    const double m = 0.75;
    const auto tilt = sample(4.0, 40, [m](double t) { return m * t; }, [m](double t) { return m * t + 0.5; });
    const auto tb = extremal_distance_bounds(tilt, m);
    CHECK(tb.lower == doctest::Approx(8.0).epsilon(1e-12));
    REQUIRE(tb.upper.has_value());
    CHECK(*tb.upper == doctest::Approx(8.0 * (1 + m * m)).epsilon(1e-12));
    CHECK(tb.lower <= *tb.upper);

    // variable width: no upper bound
    const auto vary = sample(1.0, 10, [](double) { return 0.0; }, [](double t) { return 1.0 + t; });
    CHECK_FALSE(extremal_distance_bounds(vary, 0.0).upper.has_value());
    CHECK_FALSE(extremal_distance_bounds(rect, std::nullopt).upper.has_value());
}

TEST_CASE("annulus sector in log coordinates") {
    // the sector {r < |z| < R, 0 < arg z < alpha} maps to a log(R/r) x alpha rectangle
    const double alpha = 1.1, r = 0.5, big = 20.0;
    const auto s = sample(std::log(big / r), 64, [](double) { return 0.0; }, [alpha](double) { return alpha; });
    const auto b = extremal_distance_bounds(s, 0.0);
    CHECK(b.lower == doctest::Approx(std::log(big / r) / alpha).epsilon(1e-13));
    CHECK(*b.upper == doctest::Approx(std::log(big / r) / alpha).epsilon(1e-13));
}

TEST_CASE("trapezoid lower bound converges at second order") {
    // width 1 + t^2 / 2 on [0, 2]: integral of 1/(1 + t^2/2) = sqrt(2) atan(sqrt(2))
    const double exact = std::sqrt(2.0) * std::atan(std::sqrt(2.0));
    double prev_err = 0;
    for (std::size_t n : {8u, 16u, 32u, 64u, 128u}) {
        const auto s = sample(2.0, n, [](double) { return 0.0; }, [](double t) { return 1.0 + t * t / 2; });
        const double err = std::abs(extremal_distance_bounds(s, std::nullopt).lower - exact);
        if (prev_err > 0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.05));
        prev_err = err;
    }
}

TEST_CASE("invalid strips are rejected") {
    auto s = sample(1.0, 4, [](double) { return 0.0; }, [](double) { return 1.0; });
    s.upper[2] = 0.0;
    CHECK_THROWS_AS(extremal_distance_bounds(s, 0.0), ValidationError);
    s = sample(1.0, 4, [](double) { return 0.0; }, [](double) { return 1.0; });
    s.grid[3] = s.grid[2];
    CHECK_THROWS_AS(extremal_distance_bounds(s, 0.0), ValidationError);
    s = sample(1.0, 4, [](double) { return 0.0; }, [](double) { return 1.0; });
    CHECK_THROWS_AS(extremal_distance_bounds(s, -1.0), ValidationError);
}
