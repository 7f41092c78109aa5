#pragma once
// Brute-force reference implementations used only by the tests. They share
// no code with the incremental / grid-accelerated paths they check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "xi/lattice.hpp"
#include "xi/multiplier.hpp"

namespace xi::oracle {

/// min over (s, t, a) with walk1[s] == a * walk2[t] of max(s, t).
inline std::optional<std::size_t> first_collision(const std::vector<LatticePoint>& w1,
                                                  const std::vector<LatticePoint>& w2, const MultiplierSet& set) {
    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < w1.size(); ++s) {
        for (std::size_t t = 0; t < w2.size(); ++t) {
            for (auto a : set.elements()) {
                const LatticePoint img{a.re * w2[t].re - a.im * w2[t].im, a.re * w2[t].im + a.im * w2[t].re};
                if (w1[s].re == img.re && w1[s].im == img.im) {
                    const std::size_t m = s > t ? s : t;
                    if (!best || m < *best) best = m;
                }
            }
        }
    }
    return best;
}

/// Double loop over window pairs for a single time.
inline bool exceptional(const LatticePath& path, const MultiplierSet& set, std::size_t t, std::size_t eps,
                        std::size_t radius) {
    const auto c = path[t];
    for (std::size_t s = t - radius; s <= t - eps; ++s) {
        for (std::size_t u = t + eps; u <= t + radius; ++u) {
            const long long px = path[s].re - c.re, py = path[s].im - c.im;
            const long long fx = path[u].re - c.re, fy = path[u].im - c.im;
            for (auto a : set.elements()) {
                if (px == a.re * fx - a.im * fy && py == a.re * fy + a.im * fx) return false;
            }
        }
    }
    return true;
}

/// Radius-scale windows located by direct search, then the double loop.
/// A window that runs off the path is truncated at the path end; the result
/// is nullopt when such a truncated pair shows no intersection.
inline std::optional<bool> exceptional_by_radius(const LatticePath& path, const MultiplierSet& set, std::size_t t,
                                                 double eps, double radius) {
    const auto c = path[t];
    auto dist = [&](std::size_t i) { return std::hypot(double(path[i].re - c.re), double(path[i].im - c.im)); };
    // [first k at distance >= eps, first k at distance >= radius], truncated at max_k
    auto window = [&](std::size_t max_k, auto&& at, bool& complete) {
        std::size_t lo = max_k + 1, hi = max_k;
        complete = false;
        for (std::size_t k = 1; k <= max_k; ++k) {
            if (lo > max_k && dist(at(k)) >= eps) lo = k;
            if (dist(at(k)) >= radius) {
                hi = k;
                complete = true;
                break;
            }
        }
        return std::pair{lo, hi};
    };
    bool past_ok = false, fut_ok = false;
    const auto [ps, pe] = window(t, [&](std::size_t k) { return t - k; }, past_ok);
    const auto [fs, fe] = window(path.length() - t, [&](std::size_t k) { return t + k; }, fut_ok);
    for (std::size_t ks = ps; ks <= pe; ++ks) {
        for (std::size_t ku = fs; ku <= fe; ++ku) {
            const long long px = path[t - ks].re - c.re, py = path[t - ks].im - c.im;
            const long long fx = path[t + ku].re - c.re, fy = path[t + ku].im - c.im;
            for (auto a : set.elements())
                if (px == a.re * fx - a.im * fy && py == a.re * fy + a.im * fx) return false;
        }
    }
    if (!past_ok || !fut_ok) return std::nullopt;
    return true;
}

inline std::optional<std::size_t> hitting(const LatticePath& path, double radius) {
    for (std::size_t i = 0; i < path.points().size(); ++i) {
        const double dx = path[i].re - path.origin().re, dy = path[i].im - path.origin().im;
        if (std::hypot(dx, dy) >= radius - 1e-12) return i;
    }
    return std::nullopt;
}

struct P {
    double x, y;
};

/// Exact-arithmetic-free segment test: sampled distance between segments
/// via the closed-form minimum over endpoint projections, plus crossing test.
inline double seg_dist(P a, P b, P c, P d) {
    auto orient = [](P o, P p, P q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return 0.0;
    auto pt = [](P p, P s, P e) {
        const double dx = e.x - s.x, dy = e.y - s.y, l2 = dx * dx + dy * dy;
        double u = l2 > 0 ? ((p.x - s.x) * dx + (p.y - s.y) * dy) / l2 : 0;
        u = u < 0 ? 0 : (u > 1 ? 1 : u);
        return std::hypot(s.x + u * dx - p.x, s.y + u * dy - p.y);
    };
    return std::min(std::min(pt(a, c, d), pt(b, c, d)), std::min(pt(c, a, b), pt(d, a, b)));
}

/// Checks every grid angle against every segment pair (no early exit, no
/// spatial index) and returns the largest alpha with all angles in (0, alpha]
/// free of intersections.
inline double pivot_angle_full_grid(const LatticePath& path, std::size_t t, std::size_t eps, std::size_t radius,
                                    double res) {
    const auto c = path[t];
    std::vector<P> past, fut;
    for (std::size_t k = eps; k <= radius; ++k) {
        past.push_back({double(path[t - k].re - c.re), double(path[t - k].im - c.im)});
        fut.push_back({double(path[t + k].re - c.re), double(path[t + k].im - c.im)});
    }
    for (auto p : past)
        if (p.x == 0 && p.y == 0) return 0.0;
    for (auto p : fut)
        if (p.x == 0 && p.y == 0) return 0.0;
    const double two_pi = 2 * std::acos(-1.0);
    const auto steps = static_cast<std::size_t>(std::floor((two_pi - res) / res + 1e-9));
    std::vector<bool> free(steps + 1, true);
    for (std::size_t j = 1; j <= steps; ++j) {
        const double th = double(j) * res, cs = std::cos(th), sn = std::sin(th);
        std::vector<P> rot;
        for (auto p : fut) rot.push_back({p.x * cs + p.y * sn, -p.x * sn + p.y * cs});
        for (std::size_t i = 0; i + 1 < past.size() && free[j]; ++i)
            for (std::size_t k = 0; k + 1 < rot.size() && free[j]; ++k)
                if (seg_dist(past[i], past[i + 1], rot[k], rot[k + 1]) <= 1e-9) free[j] = false;
    }
    std::size_t good = 0;
    while (good + 1 <= steps && free[good + 1]) ++good;
    return double(good) * res;
}

}  // namespace xi::oracle
