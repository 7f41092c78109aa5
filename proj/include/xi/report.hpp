#pragma once

#include <json.hpp>

#include "xi/bounds.hpp"
#include "xi/engine.hpp"
#include "xi/exceptional.hpp"
#include "xi/fit.hpp"

namespace xi {

/// {"value": v, "status": "theorem" | "conjecture" | "simulation"}
nlohmann::json tagged(double value, Status status);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const SurvivalCurve& curve);
/// Fit report: estimate, stderr, window, correction fields and residuals.
nlohmann::json to_json(const ExponentEstimate& est);
nlohmann::json to_json(const SubadditivityBracket& bracket);
nlohmann::json to_json(const ExceptionalScan& scan);
nlohmann::json to_json(const PivotReport& pivot);
nlohmann::json to_json(const BoxDimensionFit& fit);

}  // namespace xi
