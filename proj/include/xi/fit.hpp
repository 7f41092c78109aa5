#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xi/engine.hpp"
#include "xi/errors.hpp"

namespace xi {

/// Minimum survivor count for a horizon to enter a fit.
inline constexpr std::uint64_t kMinFitSurvivors = 30;

/// Closed range of horizons [t_min, t_max] used by a fit.
struct FitWindow {
    std::uint64_t t_min = 64;
    std::uint64_t t_max = 0;
};

struct HorizonResidual {
    std::uint64_t horizon = 0;
    std::uint64_t survivors = 0;
    double log_p = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
};

/// Fitted exponent on the xi scale: p(T) ~ T^(-xi/2).
struct ExponentEstimate {
    double xi_hat = 0.0;
    double std_error = 0.0;
    FitWindow window;
    bool corrected = false;
    /// Coefficient b of the 1/log T term (corrected fits only).
    double correction_coeff = 0.0;
    double correction_stderr = 0.0;
    double intercept = 0.0;
    /// 2-norm condition number of the column-equilibrated weighted design.
    double condition_number = 1.0;
    std::vector<HorizonResidual> residuals;
    std::vector<std::string> warnings;
};

/// Drops horizons below 64 and a final horizon with fewer than 30 survivors.
FitWindow default_window(const SurvivalCurve& curve);

/// default_window with the transient cutoff scaled to the set: a*S2 spreads
/// |a| times faster than S2, so the start-up regime lasts about |a|^2 times
/// longer. t_min = 64 * ceil(max|a|^2); identical to default_window for
/// unit-modulus sets.
FitWindow set_adapted_window(const SurvivalCurve& curve, const MultiplierSet& set);

/// Weighted least squares of log p_hat against log T, weights = survivors.
/// xi_hat = -2 * slope. The standard error propagates the binomial variance
/// of each p_hat together with the nesting of the horizons (survival at a
/// later horizon is a subset of survival at an earlier one), using
/// Cov(log p_i, log p_j) = 1/S_min(i,j) - 1/N with S the survivor counts.
///
/// Throws StatisticalError when fewer than 3 window horizons have >= 30
/// survivors. A window whose tail has too few survivors is shrunk with a
/// warning.
ExponentEstimate fit_exponent(const SurvivalCurve& curve, std::optional<FitWindow> window = {});

/// Non-rigorous finite-size correction: fits
///   -log p_hat = (xi/2) log T + c + b / log T
/// and reports xi with b as correction_coeff. Needs >= 5 horizons; throws
/// StatisticalError when the design is ill-conditioned.
ExponentEstimate fit_corrected(const SurvivalCurve& curve, std::optional<FitWindow> window = {});

/// Condition-number ceiling for fit_corrected.
inline constexpr double kMaxCorrectedCondition = 1e8;

struct SubadditivityBracket {
    double lower = 0.0;
    double upper = 0.0;
    double c_minus = 0.0;
    double c_plus = 0.0;
};

/// Raised when the per-n bounds do not overlap: the supplied constants are
/// inconsistent with the data.
class EmptyBracketError : public StatisticalError {
  public:
    EmptyBracketError(double lower, double upper);
    double lower;
    double upper;
};

/// Rigorous bracket on xi from survival values q_n at log-radii n = 1..N,
/// given c_- f(t) f(t') <= f(tt') <= c_+ f(t) f(t'). Each n gives
///   -log(c_+ q_n) / n <= xi <= -log(c_- q_n) / n,
/// and the result is the intersection over n.
SubadditivityBracket subadditive_bracket(std::span<const double> q, double c_minus, double c_plus);

}  // namespace xi
