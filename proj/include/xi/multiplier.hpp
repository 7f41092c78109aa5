#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "xi/lattice.hpp"

namespace xi {

enum class SetKind { FinitePoints, Wedge, Arc };

/// The multiplier set A acting on the second path by complex multiplication.
///
/// - FinitePoints: nonempty finite set of nonzero Gaussian integers, kept
///   sorted and deduplicated.
/// - Wedge: {r e^{i t} : r > 0, |t| <= alpha/2}; alpha = 0 is the half-line
///   (0, inf).
/// - Arc: {e^{i t} : 0 <= t <= alpha}, carried with an angular grid size.
///   Arcs are descriptors only; they cannot be simulated exactly.
///
/// Wedge and arc angles must lie in [0, 2pi): at 2pi the set is no longer
/// nice and the exponent is infinite.
class MultiplierSet {
  public:
    static MultiplierSet points(std::vector<LatticePoint> pts);
    static MultiplierSet wedge(double alpha);
    static MultiplierSet arc(double alpha, std::size_t resolution);

    [[nodiscard]] SetKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<LatticePoint>& elements() const noexcept { return points_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t arc_resolution() const noexcept { return resolution_; }

    /// Canonical text form, parseable by parse_set_spec.
    [[nodiscard]] std::string descriptor() const;

    /// Largest |a| over the set (FinitePoints), used for coordinate range checks.
    [[nodiscard]] double max_modulus() const noexcept;

    friend bool operator==(const MultiplierSet&, const MultiplierSet&) = default;

  private:
    MultiplierSet() = default;

    SetKind kind_ = SetKind::FinitePoints;
    std::vector<LatticePoint> points_;
    double alpha_ = 0.0;
    std::size_t resolution_ = 0;
};

/// Parses a Gaussian integer such as "4+3i", "-i", "5i", "0-1i", "2".
LatticePoint parse_gaussian(std::string_view text);

/// Parses the set mini-language:
///   points:1+0i,0+1i   wedge:alpha=1.5708   arc:alpha=0.7854,res=256
MultiplierSet parse_set_spec(std::string_view spec);

/// A* = {conj z}.
MultiplierSet conjugate(const MultiplierSet& a);
/// lambda * A for a nonzero Gaussian integer lambda.
MultiplierSet scaled(const MultiplierSet& a, LatticePoint lambda);
/// A^p = {z^p}, p >= 1.
MultiplierSet power(const MultiplierSet& a, int p);
/// Union over k of e^{2 i k pi / n} A. Only n in {1, 2, 4} keeps the set on
/// the lattice; other n throw ValidationError.
MultiplierSet nfold_union(const MultiplierSet& a, int n);

/// Logarithmic Hausdorff distance: the infimum r such that each set lies in
/// {x e^z : x in other, |z| < r}, with |log(z/w)| on the principal branch.
double log_hausdorff_distance(const MultiplierSet& a, const MultiplierSet& b);

}  // namespace xi
