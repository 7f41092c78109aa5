#include "xi/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace xi {

namespace {

struct Rows {
    std::vector<std::size_t> index;
    FitWindow window;
    std::vector<std::string> warnings;
};

Rows select_rows(const SurvivalCurve& curve, FitWindow window, std::size_t min_rows) {
    if (curve.total_samples == 0) throw StatisticalError("survival curve has no samples");
    if (window.t_max == 0) window.t_max = curve.horizons.empty() ? 0 : curve.horizons.back();
    if (window.t_min >= window.t_max) throw ValidationError("fit window needs t_min < t_max");
    Rows rows;
    bool shrunk = false;
    for (std::size_t k = 0; k < curve.horizons.size(); ++k) {
        const auto t = curve.horizons[k];
        if (t < window.t_min || t > window.t_max) continue;
        if (curve.survivors[k] < kMinFitSurvivors) {
            // survivors never increase, so nothing later can qualify
            shrunk = true;
            break;
        }
        rows.index.push_back(k);
    }
    if (rows.index.size() < min_rows) {
        throw StatisticalError("only " + std::to_string(rows.index.size()) + " horizons in the window have >= " +
                               std::to_string(kMinFitSurvivors) + " survivors; need " + std::to_string(min_rows));
    }
    rows.window = {curve.horizons[rows.index.front()], curve.horizons[rows.index.back()]};
    if (shrunk) {
        rows.warnings.push_back("window shrunk to end at T=" + std::to_string(rows.window.t_max) +
                                ": later horizons have fewer than " + std::to_string(kMinFitSurvivors) +
                                " survivors");
    }
    return rows;
}

struct WlsResult {
    Eigen::VectorXd beta;
    Eigen::MatrixXd cov;
    double condition = 1.0;
};

/// Weighted least squares y ~ X beta with weights w, and the covariance of
/// beta under the nested-survival covariance model of y = log p_hat.
WlsResult weighted_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                       const Eigen::MatrixXd& y_cov) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd xw = sw.asDiagonal() * x;
    Eigen::VectorXd scale = xw.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale(j) == 0) scale(j) = 1;
    const Eigen::MatrixXd xe = xw * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xe);
    const auto& sv = svd.singularValues();
    WlsResult r;
    r.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    // coefficient map beta = C y
    const Eigen::MatrixXd normal = x.transpose() * w.asDiagonal() * x;
    const Eigen::MatrixXd c = normal.ldlt().solve(x.transpose() * w.asDiagonal());
    r.beta = c * y;
    r.cov = c * y_cov * c.transpose();
    return r;
}

struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd w;
    Eigen::MatrixXd y_cov;
};

/// Rows of log p_hat with their weights and covariance; `columns` maps log T
/// to the design row.
template <class Columns>
Design build_design(const SurvivalCurve& curve, const Rows& rows, Eigen::Index n_cols, Columns&& columns) {
    const auto n = static_cast<Eigen::Index>(rows.index.size());
    Design d{Eigen::MatrixXd(n, n_cols), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    const double total = static_cast<double>(curve.total_samples);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = rows.index[static_cast<std::size_t>(i)];
        const double s = static_cast<double>(curve.survivors[k]);
        d.x.row(i) = columns(std::log(static_cast<double>(curve.horizons[k])));
        d.y(i) = std::log(s / total);
        d.w(i) = s;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = std::max(d.w(i), d.w(j));
            d.y_cov(i, j) = std::max(0.0, 1.0 / s - 1.0 / total);
        }
    }
    return d;
}

void fill_residuals(ExponentEstimate& est, const SurvivalCurve& curve, const Rows& rows, const Design& d,
                    const Eigen::VectorXd& beta) {
    const Eigen::VectorXd fitted = d.x * beta;
    for (std::size_t i = 0; i < rows.index.size(); ++i) {
        const auto k = rows.index[i];
        const auto row = static_cast<Eigen::Index>(i);
        est.residuals.push_back({curve.horizons[k], curve.survivors[k], d.y(row), fitted(row), d.y(row) - fitted(row)});
    }
}

}  // namespace

FitWindow default_window(const SurvivalCurve& curve) {
    FitWindow w{64, curve.horizons.empty() ? 0 : curve.horizons.back()};
    if (curve.horizons.size() >= 2 && curve.survivors.back() < kMinFitSurvivors) {
        w.t_max = curve.horizons[curve.horizons.size() - 2];
    }
    return w;
}

FitWindow set_adapted_window(const SurvivalCurve& curve, const MultiplierSet& set) {
    FitWindow w = default_window(curve);
    const double m = set.max_modulus();
    w.t_min = 64 * static_cast<std::uint64_t>(std::ceil(m * m - 1e-9));
    return w;
}

ExponentEstimate fit_exponent(const SurvivalCurve& curve, std::optional<FitWindow> window) {
    const Rows rows = select_rows(curve, window.value_or(default_window(curve)), 3);
    const Design d = build_design(curve, rows, 2, [](double lt) { return Eigen::RowVector2d(1.0, lt); });
    const WlsResult r = weighted_fit(d.x, d.y, d.w, d.y_cov);
    ExponentEstimate est;
    est.xi_hat = -2.0 * r.beta(1);
    est.std_error = 2.0 * std::sqrt(std::max(0.0, r.cov(1, 1)));
    est.intercept = r.beta(0);
    est.window = rows.window;
    est.condition_number = r.condition;
    est.warnings = rows.warnings;
    fill_residuals(est, curve, rows, d, r.beta);
    return est;
}

ExponentEstimate fit_corrected(const SurvivalCurve& curve, std::optional<FitWindow> window) {
    const Rows rows = select_rows(curve, window.value_or(default_window(curve)), 5);
    Design d = build_design(curve, rows, 3, [](double lt) { return Eigen::RowVector3d(1.0, lt, 1.0 / lt); });
    d.y = -d.y;
    const WlsResult r = weighted_fit(d.x, d.y, d.w, d.y_cov);
    if (!(r.condition <= kMaxCorrectedCondition)) {
        throw StatisticalError("corrected fit is ill-conditioned (condition number " + std::to_string(r.condition) +
                               "); widen the window");
    }
    ExponentEstimate est;
    est.corrected = true;
    est.xi_hat = 2.0 * r.beta(1);
    est.std_error = 2.0 * std::sqrt(std::max(0.0, r.cov(1, 1)));
    est.intercept = r.beta(0);
    est.correction_coeff = r.beta(2);
    est.correction_stderr = std::sqrt(std::max(0.0, r.cov(2, 2)));
    est.window = rows.window;
    est.condition_number = r.condition;
    est.warnings = rows.warnings;
    fill_residuals(est, curve, rows, d, r.beta);
    return est;
}

EmptyBracketError::EmptyBracketError(double lo, double hi)
    : StatisticalError("subadditivity bounds do not overlap (lower " + std::to_string(lo) + " > upper " +
                       std::to_string(hi) + "): the supplied constants are invalid for this sequence"),
      lower(lo),
      upper(hi) {}

SubadditivityBracket subadditive_bracket(std::span<const double> q, double c_minus, double c_plus) {
    if (q.empty()) throw ValidationError("need at least one survival value");
    if (!(c_minus > 0) || !(c_plus > 0) || !std::isfinite(c_minus) || !std::isfinite(c_plus)) {
        throw ValidationError("multiplicativity constants must be positive and finite");
    }
    SubadditivityBracket b{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                           c_minus, c_plus};
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] > 0)) throw ValidationError("survival values must be positive");
        const double n = static_cast<double>(i + 1);
        b.lower = std::max(b.lower, -std::log(c_plus * q[i]) / n);
        b.upper = std::min(b.upper, -std::log(c_minus * q[i]) / n);
    }
    if (b.lower > b.upper) throw EmptyBracketError(b.lower, b.upper);
    return b;
}

}  // namespace xi
