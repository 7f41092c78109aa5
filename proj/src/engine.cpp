#include "xi/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xi/errors.hpp"
#include "xi/parallel.hpp"

namespace xi {

namespace {

constexpr double kCoordinateLimit = 1 << 30;

void validate(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& horizons) {
    if (cfg.set.kind() == SetKind::Arc) {
        throw ValidationError("arc sets cannot be simulated; use a wedge or a rational rotation such as points:5,4+3i");
    }
    if (cfg.max_steps < 1) throw ValidationError("max_steps must be >= 1");
    if (cfg.n_samples < 1) throw ValidationError("n_samples must be >= 1");
    if (cfg.offset < 0) throw ValidationError("offset must be positive");
    if (cfg.batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (horizons.empty()) throw ValidationError("horizon schedule is empty");
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        if (horizons[k] < 1 || horizons[k] > cfg.max_steps) {
            throw ValidationError("horizons must lie in [1, max_steps]");
        }
        if (k && horizons[k] <= horizons[k - 1]) throw ValidationError("horizons must be strictly increasing");
    }
    const double reach = (static_cast<double>(cfg.max_steps) + std::abs(cfg.offset) + 1) * cfg.set.max_modulus();
    if (reach >= kCoordinateLimit) {
        throw ValidationError("walk length times |A| exceeds the 30-bit coordinate range");
    }
}

}  // namespace

std::vector<std::uint64_t> default_horizons(std::uint64_t max_steps) {
    std::vector<std::uint64_t> h;
    for (std::uint64_t t = 16; t < max_steps; t *= 2) h.push_back(t);
    if (max_steps >= 1) h.push_back(max_steps);
    return h;
}

std::int32_t default_offset(const MultiplierSet& set) {
    if (set.kind() == SetKind::Arc) throw ValidationError("arc sets cannot be simulated");
    CollisionState state(set, 4);
    for (std::int32_t a = 1; a < 1024; ++a) {
        const LatticePoint s1{0, 0}, s2{a, 0};
        state.reset();
        if (state.advance_both(s1, s2)) continue;
        int survivors = 0;
        for (unsigned d1 = 0; d1 < 4; ++d1) {
            for (unsigned d2 = 0; d2 < 4; ++d2) {
                state.reset();
                state.advance_both(s1, s2);
                if (!state.advance_both(s1 + step_increment({1, 0}, d1), s2 + step_increment({1, 0}, d2))) {
                    ++survivors;
                }
            }
        }
        if (survivors > 0) return a;
    }
    throw ValidationError("no starting offset below 1024 avoids an immediate collision");
}

std::optional<std::uint64_t> simulate_sample(std::uint64_t seed,
                                             std::uint64_t sample_index, std::int32_t offset,
                                             std::uint64_t max_steps, CollisionState& state) {
    state.reset();
    LatticePoint p1{0, 0}, p2{offset, 0};
    if (state.advance_both(p1, p2)) return 0;
    DirectionCursor c1({seed, 2 * sample_index}, 0);
    DirectionCursor c2({seed, 2 * sample_index + 1}, 0);
    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        p1 += step_increment({1, 0}, c1.next());
        p2 += step_increment({1, 0}, c2.next());
        if (state.advance_both(p1, p2)) return k;
    }
    return std::nullopt;
}

SurvivalCurve run_experiment(const ExperimentConfig& cfg) {
    const auto horizons = cfg.horizons.empty() ? default_horizons(cfg.max_steps) : cfg.horizons;
    validate(cfg, horizons);
    const std::int32_t offset = cfg.offset > 0 ? cfg.offset : default_offset(cfg.set);
    const std::uint64_t last = horizons.back();

    const std::size_t n_batches = static_cast<std::size_t>((cfg.n_samples + cfg.batch_size - 1) / cfg.batch_size);
    // alive[b][m]: samples in batch b that survive exactly the first m horizons
    std::vector<std::vector<std::uint64_t>> alive(n_batches, std::vector<std::uint64_t>(horizons.size() + 1, 0));
    std::vector<std::uint64_t> batch_steps(n_batches, 0);

    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<CollisionState> states;
    states.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) states.emplace_back(cfg.set, 1024);

    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        if (cfg.time_budget_seconds <= 0) return false;
        const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        return el.count() > cfg.time_budget_seconds;
    };

    const std::size_t done = parallel_tasks(
        n_batches, workers,
        [&](std::size_t b, unsigned w) {
            auto& counts = alive[b];
            std::uint64_t steps = 0;
            const std::uint64_t lo = static_cast<std::uint64_t>(b) * cfg.batch_size;
            const std::uint64_t hi = std::min(cfg.n_samples, lo + cfg.batch_size);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const auto hit = simulate_sample(cfg.seed, cfg.first_sample + i, offset, last, states[w]);
                std::size_t m = horizons.size();
                if (hit) {
                    m = static_cast<std::size_t>(std::lower_bound(horizons.begin(), horizons.end(), *hit) -
                                                 horizons.begin());
                    steps += *hit;
                } else {
                    steps += last;
                }
                ++counts[m];
            }
            batch_steps[b] = steps;
        },
        out_of_time);

    SurvivalCurve curve;
    curve.horizons = horizons;
    curve.survivors.assign(horizons.size(), 0);
    curve.seeds = {cfg.seed};
    curve.set_descriptor = cfg.set.descriptor();
    curve.max_steps = cfg.max_steps;
    curve.offset = offset;
    std::vector<std::uint64_t> tail(horizons.size() + 1, 0);
    for (std::size_t b = 0; b < done; ++b) {
        for (std::size_t m = 0; m <= horizons.size(); ++m) tail[m] += alive[b][m];
        curve.simulated_steps += batch_steps[b];
    }
    // survivors[k] = samples alive through more than k horizons
    std::uint64_t acc = 0;
    for (std::size_t m = horizons.size(); m-- > 0;) {
        acc += tail[m + 1];
        curve.survivors[m] = acc;
    }
    curve.total_samples = acc + tail[0];
    if (done < n_batches) {
        curve.partial = true;
        curve.warnings.push_back("time budget exhausted: " + std::to_string(curve.total_samples) + " of " +
                                 std::to_string(cfg.n_samples) + " samples completed");
    }
    if (curve.total_samples > 0 && curve.survivors.front() == 0) {
        curve.warnings.push_back("zero survivors at the smallest horizon: offset too small or set too large");
    }
    return curve;
}

SurvivalCurve merge(std::span<const SurvivalCurve> curves) {
    if (curves.empty()) throw ValidationError("nothing to merge");
    SurvivalCurve out = curves.front();
    for (std::size_t i = 1; i < curves.size(); ++i) {
        const auto& c = curves[i];
        if (c.horizons != out.horizons) throw ValidationError("cannot merge curves with different horizons");
        if (c.set_descriptor != out.set_descriptor) throw ValidationError("cannot merge curves for different sets");
        if (c.max_steps != out.max_steps || c.offset != out.offset) {
            throw ValidationError("cannot merge curves with different walk parameters");
        }
        for (std::size_t k = 0; k < out.survivors.size(); ++k) out.survivors[k] += c.survivors[k];
        out.total_samples += c.total_samples;
        out.simulated_steps += c.simulated_steps;
        out.partial = out.partial || c.partial;
        out.seeds.insert(out.seeds.end(), c.seeds.begin(), c.seeds.end());
        out.warnings.insert(out.warnings.end(), c.warnings.begin(), c.warnings.end());
    }
    return out;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string survival_csv(const SurvivalCurve& curve) {
    std::string out = "horizon,survivors,total,p_hat,ci_low,ci_high\n";
    char buf[256];
    for (std::size_t k = 0; k < curve.horizons.size(); ++k) {
        const auto ci = wilson_interval(curve.survivors[k], curve.total_samples);
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.12g,%.12g,%.12g\n",
                      static_cast<unsigned long long>(curve.horizons[k]),
                      static_cast<unsigned long long>(curve.survivors[k]),
                      static_cast<unsigned long long>(curve.total_samples), curve.fraction(k), ci.low, ci.high);
        out += buf;
    }
    return out;
}

SurvivalCurve parse_survival_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("horizon,survivors,total", 0) != 0) {
        throw ValidationError("not a survival CSV (missing header)");
    }
    SurvivalCurve c;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        unsigned long long h = 0, s = 0, n = 0;
        if (std::sscanf(line.c_str(), "%llu,%llu,%llu", &h, &s, &n) != 3) {
            throw ValidationError("bad survival CSV row: " + line);
        }
        c.horizons.push_back(h);
        c.survivors.push_back(s);
        c.total_samples = n;
    }
    if (!c.horizons.empty()) c.max_steps = c.horizons.back();
    return c;
}

}  // namespace xi
