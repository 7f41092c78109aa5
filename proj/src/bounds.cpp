#include "xi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xi/errors.hpp"

namespace xi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kLog2 = std::log(2.0);

void check_wedge_angle(double alpha) {
    if (!(alpha >= 0.0)) throw ValidationError("angle must be nonnegative");
    if (!(alpha < kTwoPi)) throw ValidationError("angle must be below 2pi (the exponent is infinite at 2pi)");
}

}  // namespace

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Theorem: return "theorem";
        case Status::Conjecture: return "conjecture";
        case Status::Simulation: return "simulation";
    }
    return "unknown";
}

double wedge_exponent(double alpha) {
    check_wedge_angle(alpha);
    return 4.0 * kPi / (kTwoPi - alpha);
}

double nfold_exact(int n) {
    if (n < 1) throw ValidationError("n must be >= 1");
    return 5.0 * n / 4.0;
}

double weak_pivot_conjecture(double theta) {
    if (!(theta >= 0.0) || !(theta <= kPi)) throw ValidationError("theta must lie in [0, pi]");
    return (5.0 * kPi / 2.0) / (kTwoPi - theta);
}

TaggedValue weak_pivot_conjecture_tagged(double theta) {
    return {weak_pivot_conjecture(theta), Status::Conjecture};
}

double pivot_upper_bound(double alpha) {
    check_wedge_angle(alpha);
    return 4.0 * kPi / (kTwoPi - alpha) * (1.0 - kLog2 * kLog2 / (4.0 * kPi * kPi));
}

double pivot_existence_threshold() { return kLog2 * kLog2 / kTwoPi; }

double strip_family_bound(double beta, double gamma) {
    if (!(beta > 0) || !(gamma > 0)) throw ValidationError("strip width and step must be positive");
    const double inv = 1.0 / gamma;
    return kPi * beta / 2.0 * inv * inv - kLog2 * inv + kTwoPi / beta;
}

double optimize_gamma(double beta) {
    if (!(beta > 0)) throw ValidationError("strip width must be positive");
    return kPi * beta / kLog2;
}

double strip_width_for_angle(double alpha) {
    check_wedge_angle(alpha);
    return kPi - alpha / 2.0;
}

double strip_crossing_lower_bound(const StripSpec& spec) {
    if (!(spec.beta > 0) || !(spec.lipschitz >= 0) || !(spec.gamma > 0) || !(spec.half_length > 0)) {
        throw ValidationError("strip needs beta > 0, M >= 0, gamma > 0, r > 0");
    }
    const double m2 = spec.lipschitz * spec.lipschitz;
    const double p = std::exp(-kPi * spec.half_length * (1.0 + m2) / spec.beta) / kPi;
    return std::clamp(p, 0.0, 1.0);
}

ExtremalBounds extremal_distance_bounds(const SampledStrip& strip, std::optional<double> lipschitz) {
    const auto& g = strip.grid;
    if (g.size() < 2 || strip.lower.size() != g.size() || strip.upper.size() != g.size()) {
        throw ValidationError("strip needs >= 2 grid points with matching boundary samples");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i && !(g[i] > g[i - 1])) throw ValidationError("strip grid must be strictly increasing");
        if (!(strip.upper[i] - strip.lower[i] > 0)) throw ValidationError("strip width must be positive everywhere");
    }
    ExtremalBounds out;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double a = 1.0 / (strip.upper[i - 1] - strip.lower[i - 1]);
        const double b = 1.0 / (strip.upper[i] - strip.lower[i]);
        out.lower += 0.5 * (g[i] - g[i - 1]) * (a + b);
    }
    if (lipschitz) {
        if (!(*lipschitz >= 0)) throw ValidationError("Lipschitz constant must be nonnegative");
        const double a = strip.upper.front() - strip.lower.front();
        bool constant = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
            constant = constant && std::abs((strip.upper[i] - strip.lower[i]) - a) <= 1e-12 * std::max(1.0, a);
        }
        if (constant) {
            const double length = g.back() - g.front();
            out.upper = length / a * (1.0 + *lipschitz * *lipschitz);
        }
    }
    return out;
}

}  // namespace xi
