#include "xi/report.hpp"

#include "xi/bounds.hpp"

namespace xi {

using nlohmann::json;

json tagged(double value, Status status) { return {{"value", value}, {"status", to_string(status)}}; }

json to_json(const ExperimentConfig& cfg) {
    return {{"set", cfg.set.descriptor()},
            {"max_steps", cfg.max_steps},
            {"n_samples", cfg.n_samples},
            {"seed", cfg.seed},
            {"offset", cfg.offset},
            {"first_sample", cfg.first_sample},
            {"horizons", cfg.horizons.empty() ? default_horizons(cfg.max_steps) : cfg.horizons},
            {"workers", cfg.workers},
            {"batch_size", cfg.batch_size},
            {"time_budget_seconds", cfg.time_budget_seconds}};
}

json to_json(const SurvivalCurve& curve) {
    json rows = json::array();
    for (std::size_t k = 0; k < curve.horizons.size(); ++k) {
        const auto ci = wilson_interval(curve.survivors[k], curve.total_samples);
        rows.push_back({{"horizon", curve.horizons[k]},
                        {"survivors", curve.survivors[k]},
                        {"p_hat", curve.fraction(k)},
                        {"ci_low", ci.low},
                        {"ci_high", ci.high}});
    }
    return {{"set", curve.set_descriptor},   {"total_samples", curve.total_samples},
            {"seeds", curve.seeds},          {"max_steps", curve.max_steps},
            {"offset", curve.offset},        {"partial", curve.partial},
            {"simulated_steps", curve.simulated_steps}, {"warnings", curve.warnings},
            {"status", to_string(Status::Simulation)}, {"rows", rows}};
}

json to_json(const ExponentEstimate& est) {
    json residuals = json::array();
    for (const auto& r : est.residuals) {
        residuals.push_back({{"horizon", r.horizon},
                             {"survivors", r.survivors},
                             {"log_p", r.log_p},
                             {"fitted", r.fitted},
                             {"residual", r.residual}});
    }
    json out = {{"estimate", tagged(est.xi_hat, Status::Simulation)},
                {"stderr", est.std_error},
                {"window", {est.window.t_min, est.window.t_max}},
                {"corrected", est.corrected},
                {"intercept", est.intercept},
                {"condition_number", est.condition_number},
                {"warnings", est.warnings},
                {"residuals", residuals}};
    if (est.corrected) {
        out["correction"] = {{"model", "-log p = (xi/2) log T + c + b / log T"},
                             {"coeff_b", est.correction_coeff},
                             {"coeff_b_stderr", est.correction_stderr},
                             {"note", "non-rigorous finite-size correction"}};
    }
    return out;
}

json to_json(const SubadditivityBracket& b) {
    return {{"lower", tagged(b.lower, Status::Theorem)},
            {"upper", tagged(b.upper, Status::Theorem)},
            {"c_minus", b.c_minus},
            {"c_plus", b.c_plus}};
}

json to_json(const ExceptionalScan& scan) {
    json out = {{"path", scan.path_ref},  {"stride", scan.stride},           {"scanned", scan.scanned},
                {"skipped", scan.skipped}, {"count", scan.times.size()}, {"times", scan.times}};
    if (scan.outer_radius) {
        out["scale"] = "radius";
        out["epsilon"] = *scan.epsilon_radius;
        out["R"] = *scan.outer_radius;
    } else {
        out["scale"] = "steps";
        out["epsilon"] = scan.epsilon;
        out["R"] = scan.radius;
    }
    return out;
}

json to_json(const PivotReport& p) {
    return {{"t", p.t},
            {"max_angle", p.max_angle},
            {"angular_resolution", p.angular_resolution},
            {"revisited", p.revisited},
            {"capped", p.capped}};
}

json to_json(const BoxDimensionFit& fit) {
    json counts = json::array();
    for (const auto& c : fit.counts) counts.push_back({{"scale", c.scale}, {"boxes", c.boxes}});
    return {{"dimension", tagged(fit.dimension, Status::Simulation)},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
            {"counts", counts}};
}

}  // namespace xi
