#include <doctest.h>

#include <cmath>
#include <random>

#include "xi/errors.hpp"
#include "xi/fit.hpp"

using namespace xi;

namespace {

template <class F>
SurvivalCurve exact_curve(F&& p, double total = 1e15, std::uint64_t max_steps = 10000) {
    SurvivalCurve c;
    c.horizons = default_horizons(max_steps);
    c.total_samples = static_cast<std::uint64_t>(total);
    for (auto t : c.horizons) c.survivors.push_back(static_cast<std::uint64_t>(std::llround(total * p(double(t)))));
    return c;
}

}  // namespace

TEST_CASE("exact power laws are recovered") {
    const auto c = exact_curve([](double t) { return std::pow(t, -0.625); });
    const auto est = fit_exponent(c);
    CHECK(std::abs(est.xi_hat - 1.25) <= 1e-9);
    CHECK(est.std_error >= 0);
    CHECK(est.window.t_min == 64);
    CHECK(est.window.t_max == 10000);
    CHECK(est.residuals.size() == 9);

    // small total with rounding still within 1e-3
    const auto rough = exact_curve([](double t) { return std::pow(t, -0.625); }, 1e7);
    CHECK(std::abs(fit_exponent(rough).xi_hat - 1.25) <= 1e-3);

    for (double xi : {0.5, 1.6, 2.5, 3.2}) {
        const auto curve = exact_curve([xi](double t) { return 0.7 * std::pow(t, -xi / 2); });
        for (FitWindow w : {FitWindow{16, 10000}, FitWindow{64, 1024}, FitWindow{256, 8192}, FitWindow{16, 64}}) {
            CHECK(std::abs(fit_exponent(curve, w).xi_hat - xi) <= 1e-9);
        }
    }
}

TEST_CASE("flat curve has exponent zero") {
    const auto c = exact_curve([](double) { return 1.0; }, 1e6);
    const auto est = fit_exponent(c);
    CHECK(std::abs(est.xi_hat) < 1e-12);
}

TEST_CASE("fit is invariant under common scaling of counts") {
    SurvivalCurve c;
    c.horizons = default_horizons(4096);
    c.total_samples = 100000;
    std::mt19937_64 rng(3);
    std::uint64_t s = 60000;
    for (std::size_t k = 0; k < c.horizons.size(); ++k) {
        c.survivors.push_back(s);
        s = s * (55 + rng() % 10) / 100;
    }
    auto big = c;
    big.total_samples *= 7;
    for (auto& v : big.survivors) v *= 7;
    const auto a = fit_exponent(c), b = fit_exponent(big);
    CHECK(a.xi_hat == doctest::Approx(b.xi_hat).epsilon(1e-12));
    CHECK(b.std_error < a.std_error);
}

TEST_CASE("window selection and failures") {
    SurvivalCurve c;
    c.horizons = {16, 32, 64, 128, 256, 512, 1024};
    c.total_samples = 10000;
    c.survivors = {5000, 3000, 1500, 700, 200, 40, 10};
    const auto w = default_window(c);
    CHECK(w.t_min == 64);
    CHECK(w.t_max == 512);
    const auto est = fit_exponent(c);
    CHECK(est.window.t_max == 512);
    CHECK(est.warnings.empty());

    // explicit window reaching into sparse horizons is shrunk with a warning
    const auto shrunk = fit_exponent(c, FitWindow{16, 1024});
    CHECK(shrunk.window.t_max == 512);
    CHECK_FALSE(shrunk.warnings.empty());

    // zero survivors inside the window also shrink it
    auto z = c;
    z.survivors = {5000, 3000, 1500, 700, 200, 0, 0};
    const auto ze = fit_exponent(z, FitWindow{16, 1024});
    CHECK(ze.window.t_max == 256);
    CHECK_FALSE(ze.warnings.empty());

    auto thin = c;
    thin.survivors = {5000, 3000, 20, 10, 5, 1, 0};
    CHECK_THROWS_AS(fit_exponent(thin), StatisticalError);
    CHECK_THROWS_AS(fit_exponent(c, FitWindow{256, 128}), ValidationError);
    CHECK_THROWS_AS(fit_corrected(c, FitWindow{128, 512}), StatisticalError);  // 3 rows < 5

    SurvivalCurve empty = c;
    empty.total_samples = 0;
    CHECK_THROWS_AS(fit_exponent(empty), StatisticalError);
}

TEST_CASE("set-adapted window scales the transient cutoff") {
    const auto c = exact_curve([](double t) { return std::pow(t, -0.625); });
    CHECK(set_adapted_window(c, MultiplierSet::points({{1, 0}, {0, 1}})).t_min == 64);
    CHECK(set_adapted_window(c, MultiplierSet::points({{5, 0}, {4, 3}})).t_min == 64 * 25);
    CHECK(set_adapted_window(c, MultiplierSet::points({{1, 1}})).t_min == 128);
}

TEST_CASE("corrected fit recovers a planted finite-size term") {
    const auto c = exact_curve([](double t) { return std::pow(t, -0.8) * std::exp(-1.5 / std::log(t)); });
    const auto est = fit_corrected(c, FitWindow{16, 10000});
    CHECK(est.corrected);
    CHECK(std::abs(est.xi_hat - 1.6) < 1e-2);
    CHECK(std::abs(est.correction_coeff - 1.5) < 1e-1);
    CHECK(est.condition_number < kMaxCorrectedCondition);

    // with b = 0 both fits agree
    const auto flat = exact_curve([](double t) { return 0.3 * std::pow(t, -0.8); });
    const auto plain = fit_exponent(flat);
    const auto corr = fit_corrected(flat);
    CHECK(std::abs(plain.xi_hat - corr.xi_hat) <= std::max(1e-9, corr.std_error));
    CHECK(std::abs(corr.correction_coeff) < 1e-6);
}

TEST_CASE("corrected fit rejects a degenerate design") {
    // five horizons crammed into a tiny log-range make the columns collinear
    SurvivalCurve c;
    c.horizons = {1000000, 1000001, 1000002, 1000003, 1000004};
    c.total_samples = 1000000000;
    c.survivors = {900000, 899990, 899980, 899970, 899960};
    CHECK_THROWS_AS(fit_corrected(c, FitWindow{1000000, 1000004}), StatisticalError);
}

TEST_CASE("subadditivity brackets") {
    const std::vector<double> q{std::exp(-1.0), std::exp(-2.0), std::exp(-3.0)};
    const auto b = subadditive_bracket(q, 1.0, 1.0);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-15));

    const std::vector<double> q2{2 * std::exp(-1.0), 2 * std::exp(-2.0), 2 * std::exp(-3.0)};
    const auto b2 = subadditive_bracket(q2, 0.5, 0.5);
    CHECK(b2.lower == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b2.upper == doctest::Approx(1.0).epsilon(1e-15));

    try {
        subadditive_bracket(q, 2.0, 0.5);
        FAIL("expected an empty bracket");
    } catch (const EmptyBracketError& e) {
        CHECK(e.lower > e.upper);
    }
    CHECK_THROWS_AS(subadditive_bracket({}, 1.0, 1.0), ValidationError);
    const std::vector<double> bad{0.5, 0.0};
    CHECK_THROWS_AS(subadditive_bracket(bad, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(subadditive_bracket(q, -1.0, 1.0), ValidationError);
}

TEST_CASE("brackets contain the planted exponent") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double xi = 0.1 + 4.9 * u(rng);
        const double lo = 0.2 + 0.8 * u(rng), hi = lo * (1.0 + 4.0 * u(rng));
        // f(t) = c(t) t^-xi with c(t) in [lo, hi] is multiplicative up to these constants
        const double c_minus = lo / (hi * hi), c_plus = hi / (lo * lo);
        std::vector<double> q;
        const int n = 1 + static_cast<int>(rng() % 40);
        for (int k = 1; k <= n; ++k) q.push_back((lo + (hi - lo) * u(rng)) * std::exp(-xi * k));
        const auto b = subadditive_bracket(q, c_minus, c_plus);
        CHECK(b.lower <= xi + 1e-12);
        CHECK(b.upper >= xi - 1e-12);
    }
}
