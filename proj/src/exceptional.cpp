#include "xi/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xi/errors.hpp"
#include "xi/parallel.hpp"
#include "xi/point_set.hpp"

namespace xi {

namespace {

void check_scale(std::size_t epsilon, std::size_t radius) {
    if (epsilon == 0 || epsilon >= radius) throw ValidationError("scale needs 0 < epsilon < R");
}

bool windows_fit(const LatticePath& path, std::size_t t, std::size_t radius) {
    return t >= radius && t + radius <= path.length();
}

struct Vec2 {
    double x;
    double y;
};

struct Segment {
    Vec2 a;
    Vec2 b;
};

constexpr double kTouch = 1e-9;

double cross(Vec2 o, Vec2 p, Vec2 q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); }

double point_segment_distance2(Vec2 p, const Segment& s) {
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    double u = len2 > 0 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    const double ex = s.a.x + u * dx - p.x, ey = s.a.y + u * dy - p.y;
    return ex * ex + ey * ey;
}

/// Segments closer than kTouch (including proper crossings).
bool segments_touch(const Segment& s, const Segment& r) {
    const double d1 = cross(r.a, r.b, s.a), d2 = cross(r.a, r.b, s.b);
    const double d3 = cross(s.a, s.b, r.a), d4 = cross(s.a, s.b, r.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    const double t2 = kTouch * kTouch;
    return point_segment_distance2(s.a, r) <= t2 || point_segment_distance2(s.b, r) <= t2 ||
           point_segment_distance2(r.a, s) <= t2 || point_segment_distance2(r.b, s) <= t2;
}

std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) | static_cast<std::uint32_t>(cy);
}

/// Unit-cell grid of segments. A segment is stored in every cell its exact
/// bounding box meets; queries use the bounding box grown by kTouch, so
/// every segment within kTouch of the query shares a visited cell.
class SegmentGrid {
  public:
    void clear() {
        cells_.clear();
        segments_.clear();
    }

    void insert(const Segment& s) {
        const auto id = static_cast<std::uint32_t>(segments_.size());
        segments_.push_back(s);
        visit_cells(s, 0.0, [&](std::uint64_t key) { cells_.insert(key, id); });
    }

    [[nodiscard]] bool touches(const Segment& s) const {
        bool hit = false;
        visit_cells(s, kTouch, [&](std::uint64_t key) {
            if (hit) return;
            for (auto e = cells_.first(key); e != KeyMultiMap::kEnd; e = cells_.next(e)) {
                if (segments_touch(s, segments_[cells_.value(e)])) {
                    hit = true;
                    return;
                }
            }
        });
        return hit;
    }

  private:
    template <class Fn>
    static void visit_cells(const Segment& s, double grow, Fn&& fn) {
        const auto x0 = static_cast<std::int64_t>(std::floor(std::min(s.a.x, s.b.x) - grow));
        const auto x1 = static_cast<std::int64_t>(std::floor(std::max(s.a.x, s.b.x) + grow));
        const auto y0 = static_cast<std::int64_t>(std::floor(std::min(s.a.y, s.b.y) - grow));
        const auto y1 = static_cast<std::int64_t>(std::floor(std::max(s.a.y, s.b.y) + grow));
        for (auto cx = x0; cx <= x1; ++cx)
            for (auto cy = y0; cy <= y1; ++cy) fn(cell_key(cx, cy));
    }

    KeyMultiMap cells_{256};
    std::vector<Segment> segments_;
};

}  // namespace

std::size_t default_stride(std::size_t path_length) {
    constexpr std::size_t kMaxPositions = 100'000;
    if (path_length <= kMaxPositions) return 1;
    return (path_length + kMaxPositions) / kMaxPositions;
}

bool is_exceptional_time(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                         CollisionState& state) {
    const LatticePoint centre = path[t];
    state.reset();
    for (std::size_t k = epsilon; k <= radius; ++k) {
        if (state.advance_both(path[t - k] - centre, path[t + k] - centre)) return false;
    }
    return true;
}

ExceptionalScan find_exceptional_times(const LatticePath& path, const MultiplierSet& set, std::size_t epsilon,
                                       std::size_t radius, std::size_t stride, unsigned workers,
                                       std::string path_ref) {
    if (set.kind() != SetKind::FinitePoints) throw ValidationError("exceptional scans need a finite point set");
    check_scale(epsilon, radius);
    if (stride == 0) throw ValidationError("stride must be positive");

    ExceptionalScan scan;
    scan.path_ref = std::move(path_ref);
    scan.epsilon = epsilon;
    scan.radius = radius;
    scan.stride = stride;

    const std::size_t n_grid = path.length() / stride + 1;
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (n_grid + kChunk - 1) / kChunk;
    std::vector<std::vector<std::size_t>> found(n_chunks);
    std::vector<std::size_t> skipped(n_chunks, 0);
    workers = std::max(1u, workers);
    std::vector<CollisionState> states;
    states.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) states.emplace_back(set, 2 * (radius - epsilon + 1));

    parallel_tasks(n_chunks, workers, [&](std::size_t c, unsigned w) {
        const std::size_t hi = std::min(n_grid, (c + 1) * kChunk);
        for (std::size_t g = c * kChunk; g < hi; ++g) {
            const std::size_t t = g * stride;
            if (!windows_fit(path, t, radius)) {
                ++skipped[c];
                continue;
            }
            if (is_exceptional_time(path, t, epsilon, radius, states[w])) found[c].push_back(t);
        }
    });
    for (std::size_t c = 0; c < n_chunks; ++c) {
        scan.times.insert(scan.times.end(), found[c].begin(), found[c].end());
        scan.skipped += skipped[c];
    }
    scan.scanned = n_grid - scan.skipped;
    return scan;
}

namespace {

enum class RadiusVerdict { Exceptional, Blocked, Skipped };

RadiusVerdict radius_window_test(const LatticePath& path, std::size_t t, double eps2, double r2,
                                 CollisionState& state) {
    const LatticePoint centre = path[t];
    state.reset();
    bool past_on = false, past_done = false, fut_on = false, fut_done = false;
    bool truncated = false;
    for (std::size_t k = 1; !(past_done && fut_done); ++k) {
        std::optional<LatticePoint> a, b;
        if (!past_done && k > t) {
            past_done = truncated = true;
        } else if (!past_done) {
            const auto d = path[t - k] - centre;
            const auto n2 = static_cast<double>(d.norm2());
            past_on = past_on || n2 >= eps2;
            if (past_on) a = d;
            past_done = n2 >= r2;
        }
        if (!fut_done && t + k > path.length()) {
            fut_done = truncated = true;
        } else if (!fut_done) {
            const auto d = path[t + k] - centre;
            const auto n2 = static_cast<double>(d.norm2());
            fut_on = fut_on || n2 >= eps2;
            if (fut_on) b = d;
            fut_done = n2 >= r2;
        }
        if ((a || b) && state.advance(a, b)) return RadiusVerdict::Blocked;
    }
    return truncated ? RadiusVerdict::Skipped : RadiusVerdict::Exceptional;
}

}  // namespace

ExceptionalScan find_exceptional_times_by_radius(const LatticePath& path, const MultiplierSet& set,
                                                 double epsilon_radius, double radius, std::size_t stride,
                                                 unsigned workers, std::string path_ref) {
    if (set.kind() != SetKind::FinitePoints) throw ValidationError("exceptional scans need a finite point set");
    if (!(epsilon_radius > 0) || !(epsilon_radius < radius) || !std::isfinite(radius)) {
        throw ValidationError("radius scale needs 0 < epsilon < R");
    }
    if (stride == 0) throw ValidationError("stride must be positive");

    ExceptionalScan scan;
    scan.path_ref = std::move(path_ref);
    scan.stride = stride;
    scan.epsilon_radius = epsilon_radius;
    scan.outer_radius = radius;
    scan.epsilon = 0;
    scan.radius = 0;

    const double eps2 = epsilon_radius * epsilon_radius, r2 = radius * radius;
    const std::size_t n_grid = path.length() / stride + 1;
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (n_grid + kChunk - 1) / kChunk;
    std::vector<std::vector<std::size_t>> found(n_chunks);
    std::vector<std::size_t> skipped(n_chunks, 0);
    workers = std::max(1u, workers);
    std::vector<CollisionState> states;
    states.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) states.emplace_back(set, 1024);

    parallel_tasks(n_chunks, workers, [&](std::size_t c, unsigned w) {
        const std::size_t hi = std::min(n_grid, (c + 1) * kChunk);
        for (std::size_t g = c * kChunk; g < hi; ++g) {
            const std::size_t t = g * stride;
            switch (radius_window_test(path, t, eps2, r2, states[w])) {
                case RadiusVerdict::Exceptional: found[c].push_back(t); break;
                case RadiusVerdict::Skipped: ++skipped[c]; break;
                case RadiusVerdict::Blocked: break;
            }
        }
    });
    for (std::size_t c = 0; c < n_chunks; ++c) {
        scan.times.insert(scan.times.end(), found[c].begin(), found[c].end());
        scan.skipped += skipped[c];
    }
    scan.scanned = n_grid - scan.skipped;
    return scan;
}

struct PivotScanner::Impl {
    SegmentGrid past;
    SegmentGrid future;
};

PivotScanner::PivotScanner() : impl_(std::make_unique<Impl>()) {}
PivotScanner::~PivotScanner() = default;
PivotScanner::PivotScanner(PivotScanner&&) noexcept = default;
PivotScanner& PivotScanner::operator=(PivotScanner&&) noexcept = default;

PivotReport PivotScanner::measure(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                                  double angular_resolution, std::optional<double> cap) {
    check_scale(epsilon, radius);
    if (!(angular_resolution > 0)) throw ValidationError("angular resolution must be positive");
    if (!windows_fit(path, t, radius)) throw ValidationError("pivot windows do not fit inside the path");

    PivotReport rep{t, 0.0, angular_resolution, false, false};
    const LatticePoint centre = path[t];
    auto past_pt = [&](std::size_t k) {
        const auto d = path[t - k] - centre;
        return Vec2{static_cast<double>(d.re), static_cast<double>(d.im)};
    };
    auto future_pt = [&](std::size_t k) {
        const auto d = path[t + k] - centre;
        return Vec2{static_cast<double>(d.re), static_cast<double>(d.im)};
    };
    for (std::size_t k = epsilon; k <= radius; ++k) {
        if (path[t - k] == centre || path[t + k] == centre) {
            rep.revisited = true;
            return rep;
        }
    }

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    auto steps = static_cast<std::size_t>(std::floor((kTwoPi - angular_resolution) / angular_resolution + 1e-9));
    bool limited_by_cap = false;
    if (cap) {
        const auto cap_steps = static_cast<std::size_t>(std::max(0.0, std::ceil(*cap / angular_resolution - 1e-9)));
        if (cap_steps < steps) {
            steps = cap_steps;
            limited_by_cap = true;
        }
    }
    if (steps == 0) {
        rep.capped = limited_by_cap;
        return rep;
    }

    auto rotate = [](Vec2 p, double c, double s) { return Vec2{p.x * c + p.y * s, -p.x * s + p.y * c}; };

    // first grid angle: grow both polylines outward from t in lockstep so
    // the common case (an intersection close to t) exits early
    {
        const double c = std::cos(angular_resolution), s = std::sin(angular_resolution);
        impl_->past.clear();
        impl_->future.clear();
        for (std::size_t k = epsilon; k < radius; ++k) {
            const Segment pseg{past_pt(k), past_pt(k + 1)};
            if (impl_->future.touches(pseg)) return rep;
            impl_->past.insert(pseg);
            const Segment fseg{rotate(future_pt(k), c, s), rotate(future_pt(k + 1), c, s)};
            if (impl_->past.touches(fseg)) return rep;
            impl_->future.insert(fseg);
        }
    }
    std::size_t good = 1;
    for (std::size_t j = 2; j <= steps; ++j) {
        const double theta = static_cast<double>(j) * angular_resolution;
        const double c = std::cos(theta), s = std::sin(theta);
        bool hit = false;
        for (std::size_t k = epsilon; k < radius && !hit; ++k) {
            hit = impl_->past.touches({rotate(future_pt(k), c, s), rotate(future_pt(k + 1), c, s)});
        }
        if (hit) break;
        good = j;
    }
    rep.max_angle = static_cast<double>(good) * angular_resolution;
    rep.capped = limited_by_cap && good == steps;
    return rep;
}

PivotReport max_pivot_angle(const LatticePath& path, std::size_t t, std::size_t epsilon, std::size_t radius,
                            double angular_resolution, std::optional<double> cap) {
    PivotScanner scanner;
    return scanner.measure(path, t, epsilon, radius, angular_resolution, cap);
}

std::vector<PivotReport> scan_pivots(const LatticePath& path, std::size_t epsilon, std::size_t radius,
                                     std::size_t stride, double angular_resolution, double min_angle,
                                     std::optional<double> cap, unsigned workers) {
    check_scale(epsilon, radius);
    if (stride == 0) throw ValidationError("stride must be positive");
    if (path.length() < 2 * radius) return {};
    const std::size_t first = (radius + stride - 1) / stride;
    const std::size_t last = (path.length() - radius) / stride;
    const std::size_t n_grid = last >= first ? last - first + 1 : 0;
    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (n_grid + kChunk - 1) / kChunk;
    std::vector<std::vector<PivotReport>> found(n_chunks);
    workers = std::max(1u, workers);
    std::vector<PivotScanner> scanners(workers);
    parallel_tasks(n_chunks, workers, [&](std::size_t c, unsigned w) {
        const std::size_t hi = std::min(n_grid, (c + 1) * kChunk);
        for (std::size_t g = c * kChunk; g < hi; ++g) {
            const std::size_t t = (first + g) * stride;
            auto rep = scanners[w].measure(path, t, epsilon, radius, angular_resolution, cap);
            if (!rep.revisited && rep.max_angle >= min_angle - 1e-12) found[c].push_back(rep);
        }
    });
    std::vector<PivotReport> out;
    for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
    return out;
}

std::vector<std::size_t> default_box_scales(std::size_t path_length) {
    std::vector<std::size_t> scales;
    if (path_length < 2) return scales;
    const auto top = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(path_length)) / 2.0));
    for (unsigned e = 4; e <= top; ++e) scales.push_back(std::size_t{1} << e);
    return scales;
}

BoxDimensionFit box_dimension(std::span<const std::size_t> times, std::size_t total_length,
                              std::span<const std::size_t> scales) {
    if (times.empty()) throw ValidationError("box dimension of an empty time set is undefined");
    if (scales.size() < 3) throw ValidationError("box dimension needs at least 3 scales");
    if (!std::is_sorted(times.begin(), times.end())) throw ValidationError("times must be sorted");
    BoxDimensionFit fit;
    std::vector<double> xs, ys;
    for (auto delta : scales) {
        if (delta == 0) throw ValidationError("box sizes must be positive");
        if (delta > std::max<std::size_t>(total_length, 1)) throw ValidationError("box size exceeds the path length");
        std::size_t boxes = 0;
        std::size_t last_box = static_cast<std::size_t>(-1);
        for (auto t : times) {
            const std::size_t b = t / delta;
            if (b != last_box) {
                ++boxes;
                last_box = b;
            }
        }
        fit.counts.push_back({delta, boxes});
        xs.push_back(-std::log(static_cast<double>(delta)));
        ys.push_back(std::log(static_cast<double>(boxes)));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) throw ValidationError("box sizes must not all be equal");
    fit.dimension = sxy / sxx;
    fit.intercept = my - fit.dimension * mx;
    fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace xi
