#include "xi/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xi/errors.hpp"

namespace xi {

AngularOccupancy::AngularOccupancy(unsigned log2_bins)
    : bins_(1u << log2_bins), words_((bins_ + 63) / 64, 0) {}

void AngularOccupancy::clear() noexcept {
    for (auto w : touched_) words_[w] = 0;
    touched_.clear();
}

void AngularOccupancy::insert(unsigned bin) noexcept {
    const unsigned w = bin / 64;
    if (words_[w] == 0) touched_.push_back(w);
    words_[w] |= std::uint64_t{1} << (bin % 64);
}

unsigned AngularOccupancy::bin_of(LatticePoint p) const noexcept {
    double t = std::atan2(static_cast<double>(p.im), static_cast<double>(p.re));
    if (t < 0) t += 2.0 * std::numbers::pi;
    auto b = static_cast<unsigned>(t / bin_width());
    return b >= bins_ ? bins_ - 1 : b;
}

double AngularOccupancy::bin_width() const noexcept { return 2.0 * std::numbers::pi / bins_; }

bool AngularOccupancy::any_in_range(unsigned lo, unsigned hi) const noexcept {
    const unsigned wlo = lo / 64, whi = hi / 64;
    for (unsigned w = wlo; w <= whi; ++w) {
        std::uint64_t word = words_[w];
        if (w == wlo) word &= ~std::uint64_t{0} << (lo % 64);
        if (w == whi && hi % 64 != 63) word &= (std::uint64_t{1} << (hi % 64 + 1)) - 1;
        if (word) return true;
    }
    return false;
}

bool AngularOccupancy::any_within(unsigned bin, unsigned reach) const noexcept {
    if (touched_.empty()) return false;
    if (2 * reach + 1 >= bins_) return true;
    const int lo = static_cast<int>(bin) - static_cast<int>(reach);
    const unsigned hi = bin + reach;
    if (lo >= 0 && hi < bins_) return any_in_range(static_cast<unsigned>(lo), hi);
    if (lo < 0) {
        return any_in_range(0, hi) || any_in_range(static_cast<unsigned>(lo + static_cast<int>(bins_)), bins_ - 1);
    }
    return any_in_range(static_cast<unsigned>(lo), bins_ - 1) || any_in_range(0, hi - bins_);
}

CollisionState::CollisionState(const MultiplierSet& set, std::size_t expected_steps,
                               unsigned log2_angle_bins)
    : wedge_(set.kind() == SetKind::Wedge),
      path1_(wedge_ ? 1 : expected_steps),
      image_(wedge_ ? 1 : expected_steps * set.elements().size()),
      angles1_(wedge_ ? log2_angle_bins : 1),
      angles2_(wedge_ ? log2_angle_bins : 1) {
    if (set.kind() == SetKind::Arc) {
        throw ValidationError("arc sets cannot be simulated exactly; use a rational rotation such as "
                              "points:5,4+3i");
    }
    multipliers_ = set.elements();
    if (wedge_) {
        const double half = set.alpha() / 2.0;
        reach_ = static_cast<unsigned>(std::floor(half / angles1_.bin_width())) + 1;
    }
}

void CollisionState::reset() noexcept {
    path1_.clear();
    image_.clear();
    if (wedge_) {
        angles1_.clear();
        angles2_.clear();
    }
    step_ = 0;
    first_ = 0;
    collided_ = false;
}

bool CollisionState::advance(std::optional<LatticePoint> new1, std::optional<LatticePoint> new2) {
    if (wedge_) return advance_wedge(new1, new2);
    if (new1 && new2) return advance_both(*new1, *new2);
    if (new1) {
        if (image_.contains(*new1)) mark();
        path1_.insert(*new1);
    }
    if (new2) {
        for (auto a : multipliers_) {
            const LatticePoint img = a * *new2;
            if (path1_.contains(img)) mark();
            image_.insert(img);
        }
    }
    ++step_;
    return collided_;
}

bool CollisionState::advance_wedge(std::optional<LatticePoint> new1, std::optional<LatticePoint> new2) {
    if (new1 && !new1->is_zero()) {
        const unsigned b = angles1_.bin_of(*new1);
        if (angles2_.any_within(b, reach_)) mark();
        angles1_.insert(b);
    }
    if (new2 && !new2->is_zero()) {
        const unsigned b = angles2_.bin_of(*new2);
        if (angles1_.any_within(b, reach_)) mark();
        angles2_.insert(b);
    }
    ++step_;
    return collided_;
}

}  // namespace xi
