#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "xi/collision.hpp"
#include "xi/errors.hpp"
#include "xi/philox.hpp"

using namespace xi;

namespace {

MultiplierSet pts(std::vector<LatticePoint> p) { return MultiplierSet::points(std::move(p)); }

std::optional<std::size_t> run_lockstep(const std::vector<LatticePoint>& w1, const std::vector<LatticePoint>& w2,
                                        const MultiplierSet& set) {
    CollisionState st(set);
    const std::size_t n = std::max(w1.size(), w2.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::optional<LatticePoint> a, b;
        if (k < w1.size()) a = w1[k];
        if (k < w2.size()) b = w2[k];
        st.advance(a, b);
    }
    return st.first_collision_step();
}

std::vector<LatticePoint> walk_from_code(std::uint32_t code, int steps, LatticePoint start) {
    std::vector<LatticePoint> w{start};
    for (int i = 0; i < steps; ++i) {
        w.push_back(w.back() + step_increment({1, 0}, (code >> (2 * i)) & 3u));
    }
    return w;
}

}  // namespace

TEST_CASE("shared lattice point is detected at the later visit") {
    // S1 reaches (2,1) at step 5, S2 reaches it at step 9; no other common point
    const std::vector<LatticePoint> s1{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1},
                                       {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}};
    const std::vector<LatticePoint> s2{{3, -1}, {2, -1}, {1, -1}, {0, -1}, {-1, -1},
                                       {-1, 0}, {-1, 1}, {0, 1},  {1, 1},  {2, 1}};
    CHECK(oracle::first_collision(s1, s2, pts({{1, 0}})) == 9u);
    CHECK(run_lockstep(s1, s2, pts({{1, 0}})) == 9u);
    auto truncated = s2;
    truncated.pop_back();
    CHECK_FALSE(run_lockstep(s1, truncated, pts({{1, 0}})).has_value());
}

TEST_CASE("rotation multiplier maps S2 onto S1") {
    const std::vector<LatticePoint> s1{{0, 0}, {-1, 0}};
    const std::vector<LatticePoint> s2{{3, 3}, {0, 1}};
    CHECK(run_lockstep(s1, s2, pts({{0, 1}})) == 1u);
    CHECK_FALSE(run_lockstep(s1, s2, pts({{1, 0}})).has_value());
}

TEST_CASE("exhaustive 6-step walks for A = {+1, -1} match the pair scan") {
    const auto set = pts({{1, 0}, {-1, 0}});
    // all 4^6 first walks against a sample of second walks
    std::mt19937 rng(11);
    for (std::uint32_t c1 = 0; c1 < 4096; ++c1) {
        const auto w1 = walk_from_code(c1, 6, {0, 0});
        for (int k = 0; k < 4; ++k) {
            const auto w2 = walk_from_code(rng() & 4095u, 6, {2, 0});
            REQUIRE(run_lockstep(w1, w2, set) == oracle::first_collision(w1, w2, set));
        }
    }
}

TEST_CASE("conjugation symmetry and unit equivariance") {
    std::mt19937 rng(5);
    const std::vector<MultiplierSet> sets{pts({{1, 0}, {0, 1}}), pts({{1, 0}}), pts({{2, 1}, {-1, 0}})};
    const std::vector<LatticePoint> units{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int trial = 0; trial < 500; ++trial) {
        const auto w1 = walk_from_code(rng(), 12, {0, 0});
        const auto w2 = walk_from_code(rng(), 12, {2, 0});
        for (const auto& a : sets) {
            const auto base = run_lockstep(w1, w2, a);
            std::vector<LatticePoint> c1, c2;
            for (auto p : w1) c1.push_back(p.conj());
            for (auto p : w2) c2.push_back(p.conj());
            CHECK(run_lockstep(c1, c2, conjugate(a)) == base);
            for (auto u : units) {
                // A u^{-1} acting on u S2 gives the same image set
                std::vector<LatticePoint> r2;
                for (auto p : w2) r2.push_back(u * p);
                CHECK(run_lockstep(w1, r2, scaled(a, u.conj())) == base);
            }
        }
    }
}

TEST_CASE("incremental verdict equals the batch intersection") {
    std::mt19937 rng(17);
    const std::vector<MultiplierSet> sets{pts({{1, 0}}), pts({{1, 0}, {-1, 0}}), pts({{1, 0}, {0, 1}}),
                                          pts({{5, 0}, {4, 3}})};
    for (int trial = 0; trial < 400; ++trial) {
        const int n1 = 1 + static_cast<int>(rng() % 15), n2 = 1 + static_cast<int>(rng() % 15);
        const auto w1 = walk_from_code(rng(), n1, {0, 0});
        const auto w2 = walk_from_code(rng(), n2, {1 + static_cast<int>(rng() % 3), 0});
        for (const auto& a : sets) REQUIRE(run_lockstep(w1, w2, a) == oracle::first_collision(w1, w2, a));
    }
}

TEST_CASE("reset makes the detector reusable") {
    const auto set = pts({{1, 0}});
    CollisionState st(set, 4);
    st.advance_both({0, 0}, {0, 0});
    CHECK(st.first_collision_step() == 0u);
    st.reset();
    CHECK_FALSE(st.first_collision_step().has_value());
    CHECK(st.step() == 0);
    // grows past the initial capacity
    for (int k = 0; k < 1000; ++k) st.advance_both({k, 0}, {-k - 1, 5});
    CHECK_FALSE(st.first_collision_step().has_value());
    st.advance_both({1000, 0}, {3, 0});
    CHECK(st.first_collision_step() == 1000u);
}

TEST_CASE("wedge mode is exact up to its one-sided angular margin") {
    std::mt19937 rng(23);
    for (double alpha : {0.0, 0.3, 1.5707963267948966, 3.0}) {
        const auto w = MultiplierSet::wedge(alpha);
        for (int trial = 0; trial < 300; ++trial) {
            const auto w1 = walk_from_code(rng(), 10, {0, 0});
            const auto w2 = walk_from_code(rng(), 10, {3, 0});
            CollisionState st(w, 16, 12);
            for (std::size_t k = 0; k < w1.size(); ++k) st.advance(w1[k], w2[k]);
            const double half = alpha / 2, slack = 2 * std::acos(-1.0) / 4096.0;
            // exact angular test with and without the margin
            bool strict = false, loose = false;
            std::optional<std::size_t> loose_step;
            for (std::size_t s = 0; s < w1.size(); ++s) {
                for (std::size_t t = 0; t < w2.size(); ++t) {
                    if (w1[s].is_zero() || w2[t].is_zero()) continue;
                    double d = std::abs(std::atan2(w1[s].im, w1[s].re) - std::atan2(w2[t].im, w2[t].re));
                    d = std::min(d, 2 * std::acos(-1.0) - d);
                    if (d <= half + 1e-12) strict = true;
                    if (d <= half + 2 * slack) {
                        loose = true;
                        const auto m = std::max(s, t);
                        if (!loose_step || m < *loose_step) loose_step = m;
                    }
                }
            }
            // a reported survival is never false; a reported collision is at most two bins off
            if (strict) CHECK(st.first_collision_step().has_value());
            if (!loose) CHECK_FALSE(st.first_collision_step().has_value());
            if (st.first_collision_step() && loose_step) CHECK(*st.first_collision_step() >= *loose_step);
            if (!st.first_collision_step()) CHECK_FALSE(strict);
        }
    }
}

TEST_CASE("arcs cannot be simulated") {
    CHECK_THROWS_AS(CollisionState(MultiplierSet::arc(0.5, 64)), ValidationError);
}
