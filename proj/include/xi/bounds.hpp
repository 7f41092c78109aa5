#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace xi {

/// Whether a number is proven, conjectured, or measured.
enum class Status { Theorem, Conjecture, Simulation };

std::string_view to_string(Status s);

struct TaggedValue {
    double value = 0.0;
    Status status = Status::Theorem;
};

/// xi of the wedge of angle alpha: 4pi / (2pi - alpha), alpha in [0, 2pi).
double wedge_exponent(double alpha);

/// xi of n equally spaced points on a circle: 5n/4.
double nfold_exact(int n);

/// Weak-pivot formula xi({1, e^{i theta}}) ~ (5pi/2) / (2pi - theta) for
/// theta in [0, pi]. A conjecture, not a theorem.
double weak_pivot_conjecture(double theta);
TaggedValue weak_pivot_conjecture_tagged(double theta);

/// Upper bound on xi of the arc {e^{it}, 0 <= t <= alpha}:
///   4pi / (2pi - alpha) * (1 - log(2)^2 / (4 pi^2)).
double pivot_upper_bound(double alpha);

/// Largest arc angle for which the bound above is below 2, i.e. where
/// pivoting points are guaranteed: log(2)^2 / (2 pi).
double pivot_existence_threshold();

/// Bound from the family of branching strips of width beta and step gamma:
///   (pi beta / 2) gamma^-2 - log(2) gamma^-1 + 2pi / beta.
double strip_family_bound(double beta, double gamma);

/// Minimizer of strip_family_bound in gamma: pi beta / log 2.
double optimize_gamma(double beta);

/// Strip width matching arc angle alpha: beta = pi - alpha / 2.
double strip_width_for_angle(double alpha);

struct StripSpec {
    double beta = 1.0;   ///< width
    double lipschitz = 0.0;
    double gamma = 1.0;  ///< step length of the piecewise-linear family
    double half_length = 1.0;
};

/// Probability lower bound (1/pi) exp(-pi r (1 + M^2) / beta) that Brownian
/// motion started on the centre line leaves the Lipschitz strip through its
/// vertical ends; clamped to [0, 1].
double strip_crossing_lower_bound(const StripSpec& spec);

/// Strip {0 < x < L, f1(x) < y < f2(x)} sampled on a grid.
struct SampledStrip {
    std::vector<double> grid;
    std::vector<double> lower;  ///< f1
    std::vector<double> upper;  ///< f2
};

struct ExtremalBounds {
    double lower = 0.0;
    std::optional<double> upper;
};

/// Extremal distance between the vertical sides: lower bound by the
/// trapezoid rule on 1/(f2 - f1); upper bound (L/a)(1 + M^2) when the width
/// is a constant a and a Lipschitz constant M for f1 is supplied.
ExtremalBounds extremal_distance_bounds(const SampledStrip& strip, std::optional<double> lipschitz);

}  // namespace xi
