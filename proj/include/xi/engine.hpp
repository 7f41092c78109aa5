#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xi/collision.hpp"
#include "xi/multiplier.hpp"

namespace xi {

struct ExperimentConfig {
    MultiplierSet set = MultiplierSet::points({{1, 0}});
    std::uint64_t max_steps = 10'000;
    std::uint64_t n_samples = 100'000;
    std::uint64_t seed = 1;
    /// S2 starts at (offset, 0); 0 means "pick with default_offset".
    std::int32_t offset = 0;
    /// Sample index of the first sample; stream ids are 2*index and 2*index+1.
    std::uint64_t first_sample = 0;
    /// Empty means default_horizons(max_steps).
    std::vector<std::uint64_t> horizons;
    unsigned workers = 1;
    std::uint64_t batch_size = 8192;
    /// Wall-clock budget in seconds; 0 disables. When exceeded the curve
    /// covers the completed prefix of batches and is marked partial.
    double time_budget_seconds = 0.0;
};

struct SurvivalCurve {
    std::vector<std::uint64_t> horizons;
    std::vector<std::uint64_t> survivors;
    std::uint64_t total_samples = 0;
    std::vector<std::uint64_t> seeds;
    std::string set_descriptor;
    std::uint64_t max_steps = 0;
    std::int32_t offset = 0;
    bool partial = false;
    /// Total lockstep steps simulated (cost diagnostic).
    std::uint64_t simulated_steps = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] double fraction(std::size_t k) const {
        return total_samples ? static_cast<double>(survivors[k]) / static_cast<double>(total_samples) : 0.0;
    }
};

/// Powers of two from 16 up to max_steps, then max_steps itself.
std::vector<std::uint64_t> default_horizons(std::uint64_t max_steps);

/// Smallest positive offset for which step 0 is collision-free and the
/// exact one-step survival probability is positive.
std::int32_t default_offset(const MultiplierSet& set);

/// Runs the lockstep pair starting at 0 and (offset, 0) for one sample and
/// returns its first collision step (absent if none up to max_steps).
std::optional<std::uint64_t> simulate_sample(std::uint64_t seed,
                                             std::uint64_t sample_index, std::int32_t offset,
                                             std::uint64_t max_steps, CollisionState& state);

/// Samples walk pairs and records survival at every horizon in one pass
/// per sample. Output is bit-identical for a fixed config regardless of
/// the worker count.
SurvivalCurve run_experiment(const ExperimentConfig& cfg);

/// Sums curves over disjoint sample sets. Throws ValidationError when the
/// horizons, set, walk length or offset differ.
SurvivalCurve merge(std::span<const SurvivalCurve> curves);

/// Wilson score interval at the given normal quantile.
struct Interval {
    double low;
    double high;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// CSV: horizon,survivors,total,p_hat,ci_low,ci_high
std::string survival_csv(const SurvivalCurve& curve);

/// Parses survival_csv output back into a curve (set fields are left empty).
SurvivalCurve parse_survival_csv(const std::string& text);

}  // namespace xi
