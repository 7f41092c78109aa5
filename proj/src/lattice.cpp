#include "xi/lattice.hpp"

#include <cmath>

#include "xi/errors.hpp"

namespace xi {

std::string to_string(LatticePoint p) {
    std::string s = std::to_string(p.re);
    if (p.im >= 0) s += '+';
    s += std::to_string(p.im);
    s += 'i';
    return s;
}

LatticePath::LatticePath(LatticePoint origin, LatticePoint step) : points_{origin}, step_(step) {
    if (step.is_zero()) throw ValidationError("walk step unit must be nonzero");
}

LatticePath LatticePath::from_points(std::vector<LatticePoint> points, LatticePoint step) {
    if (points.empty()) throw ValidationError("a path needs at least its origin");
    LatticePath path(points.front(), step);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const LatticePoint d = points[i] - points[i - 1];
        bool ok = false;
        for (unsigned dir = 0; dir < 4; ++dir) ok = ok || d == step_increment(step, dir);
        if (!ok) {
            throw ValidationError("points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " are not one step apart");
        }
    }
    path.points_ = std::move(points);
    return path;
}

void extend(LatticePath& path, const RngStream& stream, std::size_t n) {
    if (n == 0) return;
    path.reserve(path.points().size() + n);
    DirectionCursor cursor(stream, path.length());
    for (std::size_t i = 0; i < n; ++i) path.push_direction(cursor.next());
}

LatticePath random_walk(const RngStream& stream, std::size_t n, LatticePoint origin,
                        LatticePoint step) {
    LatticePath path(origin, step);
    extend(path, stream, n);
    return path;
}

HittingRecord hitting_index(const LatticePath& path, double radius) {
    if (!(radius >= 0.0)) throw ValidationError("hitting radius must be nonnegative");
    HittingRecord rec{radius, std::nullopt};
    const double r2 = radius * radius;
    const LatticePoint o = path.origin();
    const auto& pts = path.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (static_cast<double>((pts[i] - o).norm2()) >= r2) {
            rec.index = i;
            break;
        }
    }
    return rec;
}

}  // namespace xi
