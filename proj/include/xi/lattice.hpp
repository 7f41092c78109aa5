#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xi/philox.hpp"

namespace xi {

/// Gaussian integer re + i*im.
struct LatticePoint {
    std::int32_t re = 0;
    std::int32_t im = 0;

    friend constexpr bool operator==(LatticePoint, LatticePoint) = default;
    friend constexpr auto operator<=>(LatticePoint, LatticePoint) = default;

    constexpr LatticePoint& operator+=(LatticePoint o) noexcept {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend constexpr LatticePoint operator+(LatticePoint a, LatticePoint b) noexcept {
        return {a.re + b.re, a.im + b.im};
    }
    friend constexpr LatticePoint operator-(LatticePoint a, LatticePoint b) noexcept {
        return {a.re - b.re, a.im - b.im};
    }
    friend constexpr LatticePoint operator-(LatticePoint a) noexcept { return {-a.re, -a.im}; }
    friend constexpr LatticePoint operator*(LatticePoint a, LatticePoint b) noexcept {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }

    [[nodiscard]] constexpr LatticePoint conj() const noexcept { return {re, -im}; }
    [[nodiscard]] constexpr std::int64_t norm2() const noexcept {
        return std::int64_t{re} * re + std::int64_t{im} * im;
    }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return re == 0 && im == 0; }

    /// 64-bit key for hashing; coordinates are taken modulo 2^32.
    [[nodiscard]] constexpr std::uint64_t packed() const noexcept {
        return (std::uint64_t{static_cast<std::uint32_t>(re)} << 32) |
               static_cast<std::uint32_t>(im);
    }
};

inline constexpr LatticePoint kImaginaryUnit{0, 1};

/// Formats as "re+imi", e.g. "4+3i", "0-1i".
std::string to_string(LatticePoint p);

/// Unit increments {step, i*step, -step, -i*step} indexed by direction 0..3.
constexpr LatticePoint step_increment(LatticePoint step, unsigned dir) noexcept {
    switch (dir & 3u) {
        case 0: return step;
        case 1: return kImaginaryUnit * step;
        case 2: return -step;
        default: return -(kImaginaryUnit * step);
    }
}

/// Append-only walk with steps in {a, ia, -a, -ia}.
class LatticePath {
  public:
    explicit LatticePath(LatticePoint origin = {}, LatticePoint step = {1, 0});

    [[nodiscard]] const std::vector<LatticePoint>& points() const noexcept { return points_; }
    [[nodiscard]] LatticePoint origin() const noexcept { return points_.front(); }
    [[nodiscard]] LatticePoint step() const noexcept { return step_; }
    /// Number of steps taken (points().size() - 1).
    [[nodiscard]] std::size_t length() const noexcept { return points_.size() - 1; }
    [[nodiscard]] LatticePoint operator[](std::size_t i) const noexcept { return points_[i]; }
    [[nodiscard]] LatticePoint back() const noexcept { return points_.back(); }

    /// Appends one step in direction `dir` (0..3).
    void push_direction(unsigned dir) { points_.push_back(points_.back() + step_increment(step_, dir)); }

    /// Builds a path from explicit points; throws ValidationError if two
    /// consecutive points are not one step apart.
    static LatticePath from_points(std::vector<LatticePoint> points, LatticePoint step = {1, 0});

    void reserve(std::size_t n) { points_.reserve(n); }

  private:
    std::vector<LatticePoint> points_;
    LatticePoint step_;
};

/// Lengthens `path` by `n` uniform steps drawn from `stream`. Step j of the
/// path (j = previous length, ...) uses direction j of the stream, so the
/// result depends only on (seed, stream id, prior length, n).
void extend(LatticePath& path, const RngStream& stream, std::size_t n);

/// Generates a fresh walk of `n` steps from `origin`.
LatticePath random_walk(const RngStream& stream, std::size_t n, LatticePoint origin = {},
                        LatticePoint step = {1, 0});

struct HittingRecord {
    double radius = 0.0;
    std::optional<std::size_t> index;
};

/// Smallest index with |points[index] - origin| >= radius, compared on
/// squared norms.
HittingRecord hitting_index(const LatticePath& path, double radius);

}  // namespace xi
