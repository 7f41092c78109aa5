#include "xi/multiplier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "xi/errors.hpp"

namespace xi {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::int32_t parse_int(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int32_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw ValidationError("not a Gaussian integer: '" + std::string(whole) + "'");
    }
    return v;
}

/// Coefficient of i: "" / "+" / "-" mean +-1.
std::int32_t parse_imag_coeff(std::string_view s, std::string_view whole) {
    if (s.empty() || s == "+") return 1;
    if (s == "-") return -1;
    return parse_int(s, whole);
}

double parse_decimal(std::string_view s, std::string_view what) {
    s = trim(s);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ValidationError("bad decimal for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

void check_angle(double alpha, const char* kind) {
    if (!(alpha >= 0.0) || !(alpha < 2.0 * std::numbers::pi)) {
        throw ValidationError(std::string(kind) +
                              " angle must lie in [0, 2pi); a set filling the full circle is not nice");
    }
}

const MultiplierSet& require_points(const MultiplierSet& a, const char* op) {
    if (a.kind() != SetKind::FinitePoints) {
        throw ValidationError(std::string(op) + " requires a finite point set");
    }
    return a;
}

/// Key=value pairs after the "kind:" prefix.
std::vector<std::pair<std::string_view, std::string_view>> parse_params(std::string_view body) {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    while (!body.empty()) {
        const auto comma = body.find(',');
        const auto item = trim(body.substr(0, comma));
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("expected key=value in set spec, got '" + std::string(item) + "'");
        }
        out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MultiplierSet MultiplierSet::points(std::vector<LatticePoint> pts) {
    if (pts.empty()) throw ValidationError("multiplier set must be nonempty");
    for (auto p : pts) {
        if (p.is_zero()) throw ValidationError("0 cannot belong to a nice multiplier set");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    MultiplierSet s;
    s.kind_ = SetKind::FinitePoints;
    s.points_ = std::move(pts);
    return s;
}

MultiplierSet MultiplierSet::wedge(double alpha) {
    check_angle(alpha, "wedge");
    MultiplierSet s;
    s.kind_ = SetKind::Wedge;
    s.alpha_ = alpha;
    return s;
}

MultiplierSet MultiplierSet::arc(double alpha, std::size_t resolution) {
    check_angle(alpha, "arc");
    if (resolution == 0) throw ValidationError("arc resolution must be positive");
    MultiplierSet s;
    s.kind_ = SetKind::Arc;
    s.alpha_ = alpha;
    s.resolution_ = resolution;
    return s;
}

std::string MultiplierSet::descriptor() const {
    switch (kind_) {
        case SetKind::FinitePoints: {
            std::string out = "points:";
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i) out += ',';
                out += to_string(points_[i]);
            }
            return out;
        }
        case SetKind::Wedge: return "wedge:alpha=" + format_double(alpha_);
        case SetKind::Arc:
            return "arc:alpha=" + format_double(alpha_) + ",res=" + std::to_string(resolution_);
    }
    return {};
}

double MultiplierSet::max_modulus() const noexcept {
    double m = 0.0;
    for (auto p : points_) m = std::max(m, std::sqrt(static_cast<double>(p.norm2())));
    return kind_ == SetKind::FinitePoints ? m : 1.0;
}

LatticePoint parse_gaussian(std::string_view text) {
    const auto s = trim(text);
    if (s.empty()) throw ValidationError("empty Gaussian integer");
    if (s.back() != 'i') return {parse_int(s, text), 0};
    const auto body = s.substr(0, s.size() - 1);
    // split at the last sign that is not the leading one
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if (body[k] == '+' || body[k] == '-') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return {0, parse_imag_coeff(body, text)};
    return {parse_int(body.substr(0, split), text), parse_imag_coeff(body.substr(split), text)};
}

MultiplierSet parse_set_spec(std::string_view spec) {
    spec = trim(spec);
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ValidationError("set spec must look like points:..., wedge:alpha=..., or arc:alpha=...");
    }
    const auto kind = trim(spec.substr(0, colon));
    const auto body = spec.substr(colon + 1);
    if (kind == "points") {
        std::vector<LatticePoint> pts;
        std::string_view rest = body;
        while (true) {
            const auto comma = rest.find(',');
            pts.push_back(parse_gaussian(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return MultiplierSet::points(std::move(pts));
    }
    if (kind == "wedge" || kind == "arc") {
        std::optional<double> alpha;
        std::size_t res = 256;
        for (auto [key, value] : parse_params(body)) {
            if (key == "alpha") {
                alpha = parse_decimal(value, "alpha");
            } else if (key == "res" && kind == "arc") {
                const double r = parse_decimal(value, "res");
                if (r < 1 || r != std::floor(r)) throw ValidationError("arc res must be a positive integer");
                res = static_cast<std::size_t>(r);
            } else {
                throw ValidationError("unknown parameter '" + std::string(key) + "' for " +
                                      std::string(kind));
            }
        }
        if (!alpha) throw ValidationError(std::string(kind) + " spec needs alpha=");
        return kind == "wedge" ? MultiplierSet::wedge(*alpha) : MultiplierSet::arc(*alpha, res);
    }
    throw ValidationError("unknown set kind '" + std::string(kind) + "'");
}

MultiplierSet conjugate(const MultiplierSet& a) {
    std::vector<LatticePoint> out;
    for (auto p : require_points(a, "conjugate").elements()) out.push_back(p.conj());
    return MultiplierSet::points(std::move(out));
}

MultiplierSet scaled(const MultiplierSet& a, LatticePoint lambda) {
    if (lambda.is_zero()) throw ValidationError("scale factor must be nonzero");
    std::vector<LatticePoint> out;
    for (auto p : require_points(a, "scale").elements()) out.push_back(lambda * p);
    return MultiplierSet::points(std::move(out));
}

MultiplierSet power(const MultiplierSet& a, int p) {
    if (p < 1) throw ValidationError("power must be >= 1 (negative powers leave the lattice)");
    std::vector<LatticePoint> out;
    for (auto z : require_points(a, "power").elements()) {
        LatticePoint acc{1, 0};
        for (int k = 0; k < p; ++k) acc = acc * z;
        out.push_back(acc);
    }
    return MultiplierSet::points(std::move(out));
}

MultiplierSet nfold_union(const MultiplierSet& a, int n) {
    require_points(a, "n-fold union");
    if (n != 1 && n != 2 && n != 4) {
        throw ValidationError("n-fold union with n=" + std::to_string(n) +
                              " is off the lattice: only the roots of unity 1, -1, +-i are Gaussian integers");
    }
    const LatticePoint root = n == 1 ? LatticePoint{1, 0} : n == 2 ? LatticePoint{-1, 0} : kImaginaryUnit;
    std::vector<LatticePoint> out;
    LatticePoint rot{1, 0};
    for (int k = 0; k < n; ++k) {
        for (auto z : a.elements()) out.push_back(rot * z);
        rot = rot * root;
    }
    return MultiplierSet::points(std::move(out));
}

double log_hausdorff_distance(const MultiplierSet& a, const MultiplierSet& b) {
    require_points(a, "log-Hausdorff distance");
    require_points(b, "log-Hausdorff distance");
    auto as_complex = [](LatticePoint p) { return std::complex<double>(p.re, p.im); };
    auto directed = [&](const MultiplierSet& x, const MultiplierSet& y) {
        double worst = 0.0;
        for (auto p : x.elements()) {
            double best = std::numeric_limits<double>::infinity();
            for (auto q : y.elements()) best = std::min(best, std::abs(std::log(as_complex(p) / as_complex(q))));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace xi
