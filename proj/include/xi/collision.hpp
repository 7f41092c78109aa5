#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "xi/multiplier.hpp"
#include "xi/point_set.hpp"

namespace xi {

/// Occupied directions of one walk on a uniform grid of angles mod 2pi.
class AngularOccupancy {
  public:
    explicit AngularOccupancy(unsigned log2_bins = 16);

    void clear() noexcept;
    void insert(unsigned bin) noexcept;
    /// True if any occupied bin lies within circular bin distance `reach` of `bin`.
    [[nodiscard]] bool any_within(unsigned bin, unsigned reach) const noexcept;

    [[nodiscard]] unsigned bins() const noexcept { return bins_; }
    [[nodiscard]] unsigned bin_of(LatticePoint p) const noexcept;
    [[nodiscard]] double bin_width() const noexcept;

  private:
    [[nodiscard]] bool any_in_range(unsigned lo, unsigned hi) const noexcept;  // inclusive, lo <= hi

    unsigned bins_;
    std::vector<std::uint64_t> words_;
    std::vector<unsigned> touched_;
};

/// Incremental detector for the event {S1 meets A*S2}.
///
/// Both walks advance in lockstep; call k of advance() passes S1_k and
/// S2_k. After call k the detector has compared every pair (s, t) with
/// max(s, t) <= k, so the first positive test happens exactly at
/// min over colliding pairs of max(s, t).
///
/// FinitePoints: exact lattice test through two point sets (S1 points and
/// A*S2 points). Wedge: angular test, S1_s meets W*S2_t iff the circular
/// distance between arg S1_s and arg S2_t is at most alpha/2; points at the
/// origin carry no direction and are skipped. The angular grid adds one bin
/// width of slack on each side so a reported survival is never false.
class CollisionState {
  public:
    explicit CollisionState(const MultiplierSet& set, std::size_t expected_steps = 256,
                            unsigned log2_angle_bins = 16);

    /// Forgets all inserted points; the next advance() is step 0.
    void reset() noexcept;

    /// Processes one lockstep step. Either point may be absent when that
    /// walk has already ended. Returns true if a collision is known after
    /// this step.
    bool advance(std::optional<LatticePoint> new1, std::optional<LatticePoint> new2);

    /// Hot-path variant with both points present.
    bool advance_both(LatticePoint new1, LatticePoint new2) {
        if (wedge_) return advance_wedge(new1, new2);
        if (!collided_ && image_.contains(new1)) mark();
        path1_.insert(new1);
        for (auto a : multipliers_) {
            const LatticePoint img = a * new2;
            if (!collided_ && path1_.contains(img)) mark();
            image_.insert(img);
        }
        ++step_;
        return collided_;
    }

    [[nodiscard]] std::optional<std::size_t> first_collision_step() const noexcept {
        return collided_ ? std::optional<std::size_t>(first_) : std::nullopt;
    }
    /// Number of advance() calls since the last reset.
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

  private:
    void mark() noexcept {
        if (!collided_) {
            collided_ = true;
            first_ = step_;
        }
    }
    bool advance_wedge(std::optional<LatticePoint> new1, std::optional<LatticePoint> new2);

    std::vector<LatticePoint> multipliers_;
    bool wedge_ = false;
    PointSet path1_;
    PointSet image_;
    AngularOccupancy angles1_;
    AngularOccupancy angles2_;
    unsigned reach_ = 0;
    std::size_t step_ = 0;
    std::size_t first_ = 0;
    bool collided_ = false;
};

}  // namespace xi
