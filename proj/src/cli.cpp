#include "xi/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "xi/bounds.hpp"
#include "xi/engine.hpp"
#include "xi/errors.hpp"
#include "xi/exceptional.hpp"
#include "xi/fit.hpp"
#include "xi/philox.hpp"
#include "xi/report.hpp"
#include "xi/version.hpp"

namespace xi::cli {

using nlohmann::json;

std::uint64_t parse_count(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v) || v < 0 || v != std::floor(v) ||
        v > 9.007199254740992e15) {
        throw ValidationError(what + " must be a nonnegative integer (got '" + text + "')");
    }
    return static_cast<std::uint64_t>(v);
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
        throw ValidationError(what + ": '" + text + "' is not a number");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ValidationError(what + " must look like a:b (got '" + text + "')");
    return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("grid must look like start:stop:step (got '" + text + "')");
    const double a = parse_number(parts[0], "grid start"), b = parse_number(parts[1], "grid stop");
    const double step = parse_number(parts[2], "grid step");
    if (!(step > 0)) throw ValidationError("grid step must be positive");
    if (b < a) throw ValidationError("grid stop must not be below its start");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double x = a + static_cast<double>(i) * step;
        if (x > b + 1e-9 * step) break;
        grid.push_back(x);
        if (grid.size() > 1'000'000) throw ValidationError("grid has more than 10^6 points");
    }
    return grid;
}

namespace {

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string num(double v) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// CSV cell quoting (set descriptors contain commas).
std::string csv_quote(const std::string& text) {
    std::string q = "\"";
    for (char ch : text) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

json num_or_null(std::optional<double> v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

/// Output directory plus the run manifest listing every file written.
class Outputs {
  public:
    Outputs(std::string dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {
        started_ = iso_now();
        t0_ = std::chrono::steady_clock::now();
        if (!dir_.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
        }
    }

    [[nodiscard]] bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::string& content) {
        if (!enabled()) return;
        const auto path = (std::filesystem::path(dir_) / name).string();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        f << content;
        f.close();
        if (!f) throw IoError("failed writing '" + path + "'");
        files_.push_back(path);
    }

    /// Writes manifest.json; call last.
    void finish(const json& config, std::uint64_t seed) {
        if (!enabled()) return;
        const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0_;
        const auto manifest_path = (std::filesystem::path(dir_) / "manifest.json").string();
        auto outputs = files_;
        outputs.push_back(manifest_path);
        json m = {{"command", command_}, {"config", config},         {"seed", seed},
                  {"version", kVersion}, {"started", started_},      {"finished", iso_now()},
                  {"wall_seconds", wall.count()}, {"outputs", outputs}};
        std::ofstream f(manifest_path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + manifest_path + "' for writing");
        f << m.dump(2) << "\n";
        if (!f) throw IoError("failed writing '" + manifest_path + "'");
    }

  private:
    std::string dir_;
    std::string command_;
    std::string started_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<std::string> files_;
};

struct Common {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out_dir;
    std::string format = "csv";
    std::string command;
};

/// Both fits of one survival curve; a failed fit is reported in place.
struct FitPair {
    std::optional<ExponentEstimate> plain;
    std::optional<ExponentEstimate> corrected;
    std::string plain_error;
    std::string corrected_error;
};

FitPair fit_both(const SurvivalCurve& curve, FitWindow window) {
    FitPair f;
    try {
        f.plain = fit_exponent(curve, window);
    } catch (const StatisticalError& e) {
        f.plain_error = e.what();
    }
    try {
        f.corrected = fit_corrected(curve, window);
    } catch (const StatisticalError& e) {
        f.corrected_error = e.what();
    }
    return f;
}

json fits_json(const FitPair& f) {
    return {{"plain", f.plain ? to_json(*f.plain) : json{{"error", f.plain_error}}},
            {"corrected", f.corrected ? to_json(*f.corrected) : json{{"error", f.corrected_error}}}};
}

bool has_zero_survivor_flag(const SurvivalCurve& c) { return c.total_samples > 0 && c.survivors.front() == 0; }

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string set;
    std::string samples = "1e5";
    std::string steps = "1e4";
    std::int32_t offset = 0;
    std::string first_sample = "0";
    std::string batch = "8192";
    double time_budget = 0;
    std::string t_min;
    std::string t_max;
};

int cmd_estimate(const EstimateArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    cfg.set = parse_set_spec(a.set);
    cfg.n_samples = parse_count(a.samples, "--samples");
    cfg.max_steps = parse_count(a.steps, "--steps");
    cfg.offset = a.offset;
    cfg.first_sample = parse_count(a.first_sample, "--first-sample");
    cfg.batch_size = parse_count(a.batch, "--batch");
    cfg.time_budget_seconds = a.time_budget;
    cfg.seed = c.seed;
    cfg.workers = c.workers;

    Outputs outputs(c.out_dir, c.command);
    const auto curve = run_experiment(cfg);
    for (const auto& w : curve.warnings) err << "warning: " << w << "\n";
    const auto csv = survival_csv(curve);
    outputs.write("curve.csv", csv);

    json cfg_json = to_json(cfg);
    cfg_json["offset"] = curve.offset;
    if (has_zero_survivor_flag(curve)) {
        outputs.finish(cfg_json, cfg.seed);
        err << "error: zero survivors at the smallest horizon; increase --offset or use a smaller set\n";
        return kStatistical;
    }

    FitWindow window = set_adapted_window(curve, cfg.set);
    if (!a.t_min.empty()) window.t_min = parse_count(a.t_min, "--t-min");
    if (!a.t_max.empty()) window.t_max = parse_count(a.t_max, "--t-max");
    const auto fits = fit_both(curve, window);

    // data files must not depend on the worker count, so it stays in the manifest only
    json data_cfg = cfg_json;
    data_cfg.erase("workers");
    json report = {{"set", cfg.set.descriptor()}, {"config", data_cfg}, {"curve", to_json(curve)}};
    report.update(fits_json(fits));
    outputs.write("fit.json", report.dump(2) + "\n");
    outputs.finish(cfg_json, cfg.seed);

    if (c.format == "json") {
        out << report.dump(2) << "\n";
    } else {
        out << csv;
    }
    if (fits.plain) {
        err << "xi_hat = " << num(fits.plain->xi_hat) << " +- " << num(fits.plain->std_error) << " on ["
            << fits.plain->window.t_min << ", " << fits.plain->window.t_max << "]";
        if (fits.corrected) err << "; corrected " << num(fits.corrected->xi_hat) << " +- "
                                << num(fits.corrected->std_error);
        err << "\n";
        return kOk;
    }
    err << "error: " << fits.plain_error << "\n";
    return kStatistical;
}

// ------------------------------------------------------------------ table1

struct Table1Row {
    std::string set;
    std::string conjectured_label;
    double conjectured;
    Status conjectured_status;
    double tabulated_samples;
    double tabulated_computed;
    std::optional<double> tabulated_corrected;
};

std::vector<Table1Row> table1_rows() {
    constexpr double kPi = std::numbers::pi;
    return {
        {"points:1,-1", "2.5", nfold_exact(2), Status::Theorem, 2.6e9, 2.501293, std::nullopt},
        {"points:1,0+1i", "5/3", weak_pivot_conjecture(kPi / 2), Status::Conjecture, 3.0e8, 1.662239, 1.668242},
        {"points:5,4+3i", num(std::round(weak_pivot_conjecture(std::atan2(3.0, 4.0)) * 1e6) / 1e6),
         weak_pivot_conjecture(std::atan2(3.0, 4.0)), Status::Conjecture, 1.2e6, 1.382311, 1.394610},
        {"points:5,4+3i,5i", "5/3", 5.0 / 3.0, Status::Conjecture, 1.6e7, 1.662964, 1.665650},
    };
}

struct Table1Args {
    double scale = 1e-3;
    std::string steps = "1e5";
    std::int32_t offset = 2;
    bool yes = false;
    bool dry_run = false;
};

int cmd_table1(const Table1Args& a, const Common& c, std::ostream& out, std::ostream& err) {
    if (!(a.scale > 0) || !(a.scale <= 1)) throw ValidationError("--scale must lie in (0, 1]");
    const auto steps = parse_count(a.steps, "--steps");
    const auto rows = table1_rows();
    std::vector<std::uint64_t> samples;
    double total = 0;
    for (const auto& r : rows) {
        samples.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(r.tabulated_samples * a.scale))));
        total += static_cast<double>(samples.back());
    }
    json plan = json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        plan.push_back({{"set", rows[k].set}, {"samples", samples[k]}, {"steps", steps}, {"offset", a.offset}});
    }
    json cfg_json = {{"scale", a.scale}, {"steps", steps}, {"offset", a.offset}, {"workers", c.workers},
                     {"rows", plan}};
    if (a.dry_run) {
        out << plan.dump(2) << "\n";
        return kOk;
    }
    if (total > 1e8 && !a.yes) {
        err << "planned runs:\n" << plan.dump(2) << "\n";
        throw ValidationError("this table needs " + num(total) +
                              " samples; pass --yes to run it (or lower --scale)");
    }

    Outputs outputs(c.out_dir, c.command);
    json table = json::array();
    std::string csv =
        "set,conjectured,conjectured_value,conjectured_status,tabulated_samples,tabulated_computed,tabulated_corrected,"
        "samples,computed,computed_stderr,corrected,corrected_stderr,rel_err_computed,rel_err_corrected,"
        "tabulated_rel_err_computed,status\n";
    bool any_failed = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        json row = {{"set", r.set},
                    {"conjectured", r.conjectured_label},
                    {"conjectured_value", tagged(r.conjectured, r.conjectured_status)},
                    {"tabulated_samples", r.tabulated_samples},
                    {"tabulated_computed", r.tabulated_computed},
                    {"tabulated_corrected", num_or_null(r.tabulated_corrected)},
                    {"samples", samples[k]}};
        std::optional<double> ours, ours_se, corr, corr_se;
        std::string status = "ok";
        try {
            ExperimentConfig cfg;
            cfg.set = parse_set_spec(r.set);
            cfg.n_samples = samples[k];
            cfg.max_steps = steps;
            cfg.offset = a.offset;
            cfg.seed = c.seed;
            cfg.workers = c.workers;
            const auto curve = run_experiment(cfg);
            outputs.write("curve_" + std::to_string(k + 1) + ".csv", survival_csv(curve));
            if (has_zero_survivor_flag(curve)) throw StatisticalError("zero survivors at the smallest horizon");
            const auto fits = fit_both(curve, set_adapted_window(curve, cfg.set));
            if (!fits.plain) throw StatisticalError(fits.plain_error);
            ours = fits.plain->xi_hat;
            ours_se = fits.plain->std_error;
            if (fits.corrected) {
                corr = fits.corrected->xi_hat;
                corr_se = fits.corrected->std_error;
            }
            row["fits"] = fits_json(fits);
        } catch (const std::exception& e) {
            status = std::string("failed: ") + e.what();
            any_failed = true;
            err << "row " << r.set << " " << status << "\n";
        }
        auto rel = [&](std::optional<double> v) -> std::optional<double> {
            if (!v) return std::nullopt;
            return *v / r.conjectured - 1.0;
        };
        row["computed"] = num_or_null(ours);
        row["computed_stderr"] = num_or_null(ours_se);
        row["corrected"] = num_or_null(corr);
        row["corrected_stderr"] = num_or_null(corr_se);
        row["rel_err_computed"] = num_or_null(rel(ours));
        row["rel_err_corrected"] = num_or_null(rel(corr));
        row["tabulated_rel_err_computed"] = r.tabulated_computed / r.conjectured - 1.0;
        row["status"] = status;
        table.push_back(row);

        auto cell = [](std::optional<double> v) { return v ? num(*v) : std::string(); };
        csv += csv_quote(r.set) + "," + r.conjectured_label + "," + num(r.conjectured) + "," +
               std::string(to_string(r.conjectured_status)) + "," + num(r.tabulated_samples) + "," +
               num(r.tabulated_computed) + "," + cell(r.tabulated_corrected) + "," + std::to_string(samples[k]) + "," +
               cell(ours) + "," + cell(ours_se) + "," + cell(corr) + "," + cell(corr_se) + "," + cell(rel(ours)) +
               "," + cell(rel(corr)) + "," + num(r.tabulated_computed / r.conjectured - 1.0) + "," + csv_quote(status) + "\n";
    }
    const std::string table_json = json{{"rows", table}, {"note", "corrected values use a non-rigorous 1/log T model"}}.dump(2) + "\n";
    outputs.write("table1.csv", csv);
    outputs.write("table1.json", table_json);
    outputs.finish(cfg_json, c.seed);
    out << (c.format == "json" ? table_json : csv);
    return any_failed ? kStatistical : kOk;
}

// ------------------------------------------------------------------ pivots

struct PivotArgs {
    double angle = 0.05;
    std::string steps = "1e5";
    std::string scale = "10:1000";
    double resolution = 0;
    std::string walks = "1";
    std::string stride;
    bool no_cap = false;
};

std::pair<std::size_t, std::size_t> step_scale(const std::string& text) {
    const auto [e, r] = parse_pair(text, "--scale");
    if (e < 1 || r <= e || e != std::floor(e) || r != std::floor(r)) {
        throw ValidationError("--scale needs integers 1 <= eps < R");
    }
    return {static_cast<std::size_t>(e), static_cast<std::size_t>(r)};
}

int cmd_pivots(const PivotArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    if (!(a.angle > 0) || !(a.angle < 2 * std::numbers::pi)) throw ValidationError("--angle must lie in (0, 2pi)");
    const auto steps = parse_count(a.steps, "--steps");
    const auto [eps, radius] = step_scale(a.scale);
    const double res = a.resolution > 0 ? a.resolution : a.angle / 5;
    const auto walks = parse_count(a.walks, "--walks");
    if (walks < 1) throw ValidationError("--walks must be >= 1");
    const std::size_t stride = a.stride.empty() ? default_stride(steps) : parse_count(a.stride, "--stride");
    if (stride < 1) throw ValidationError("--stride must be >= 1");
    const std::optional<double> cap = a.no_cap ? std::nullopt : std::optional<double>(a.angle);

    Outputs outputs(c.out_dir, c.command);
    json runs = json::array();
    std::string csv = "walk,t,max_angle,capped\n";
    std::size_t with_pivot = 0;
    for (std::uint64_t w = 0; w < walks; ++w) {
        const auto path = random_walk(RngStream{c.seed, w}, steps);
        const auto reps = scan_pivots(path, eps, radius, stride, res, a.angle, cap, c.workers);
        json list = json::array();
        for (const auto& r : reps) {
            list.push_back(to_json(r));
            csv += std::to_string(w) + "," + std::to_string(r.t) + "," + num(r.max_angle) + "," +
                   (r.capped ? "1" : "0") + "\n";
        }
        if (!reps.empty()) ++with_pivot;
        runs.push_back({{"walk", w}, {"stream", w}, {"count", reps.size()}, {"pivots", list}});
        err << "walk " << w << ": " << reps.size() << " times with max_angle >= " << num(a.angle) << "\n";
    }
    json cfg_json = {{"angle", a.angle},      {"steps", steps},   {"epsilon", eps}, {"R", radius},
                     {"resolution", res},     {"walks", walks},   {"stride", stride},
                     {"cap", num_or_null(cap)}};
    json report = {{"config", cfg_json},
                   {"existence_threshold", tagged(pivot_existence_threshold(), Status::Theorem)},
                   {"walks_with_pivot", with_pivot},
                   {"runs", runs}};
    const std::string report_json = report.dump(2) + "\n";
    outputs.write("pivots.json", report_json);
    outputs.write("pivots.csv", csv);
    outputs.finish(cfg_json, c.seed);
    out << (c.format == "json" ? report_json : csv);
    return kOk;
}

// --------------------------------------------------------------------- dim

struct DimArgs {
    std::string set = "points:1";
    std::string steps = "1e6";
    std::string scale;
    std::string radius_scale;
    std::string stride = "1";
    std::string scales;
    bool times = false;
};

std::optional<double> known_exponent(const MultiplierSet& set) {
    if (set.kind() != SetKind::FinitePoints) return std::nullopt;
    // n equally spaced unit points
    const auto& e = set.elements();
    const std::vector<std::vector<LatticePoint>> families{
        {{1, 0}}, {{-1, 0}, {1, 0}}, {{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
    for (const auto& f : families) {
        if (e == f) return nfold_exact(static_cast<int>(f.size()));
    }
    return std::nullopt;
}

int cmd_dim(const DimArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    const auto set = parse_set_spec(a.set);
    const auto steps = parse_count(a.steps, "--steps");
    if (steps < 200) throw ValidationError("--steps must be >= 200");
    const auto [eps, radius] =
        a.scale.empty() ? std::pair<std::size_t, std::size_t>{1, steps / 100} : step_scale(a.scale);
    std::pair<double, double> rscale{std::sqrt(double(eps)), std::sqrt(double(radius))};
    if (!a.radius_scale.empty()) rscale = parse_pair(a.radius_scale, "--radius-scale");
    const auto stride = parse_count(a.stride, "--stride");
    std::vector<std::size_t> scales = default_box_scales(steps);
    if (!a.scales.empty()) {
        scales.clear();
        for (const auto& s : split(a.scales, ',')) scales.push_back(parse_count(s, "--scales"));
    }

    Outputs outputs(c.out_dir, c.command);
    const auto path = random_walk(RngStream{c.seed, 0}, steps);
    const auto step_scan = find_exceptional_times(path, set, eps, radius, stride, c.workers);
    const auto radius_scan =
        find_exceptional_times_by_radius(path, set, rscale.first, rscale.second, stride, c.workers);

    auto summarize = [&](const ExceptionalScan& scan) {
        json j = to_json(scan);
        if (!a.times) j.erase("times");
        if (scan.times.empty()) {
            j["fit"] = {{"error", "no exceptional times found"}};
        } else {
            j["fit"] = to_json(box_dimension(scan.times, steps, scales));
        }
        return j;
    };
    json cfg_json = {{"set", set.descriptor()}, {"steps", steps},     {"epsilon", eps},
                     {"R", radius},             {"epsilon_radius", rscale.first},
                     {"R_radius", rscale.second}, {"stride", stride}, {"scales", scales}};
    const auto xi = known_exponent(set);
    json report = {{"config", cfg_json},
                   {"step_scale", summarize(step_scan)},
                   {"radius_scale", summarize(radius_scan)},
                   {"predicted", xi ? tagged(1.0 - *xi / 2.0, Status::Theorem) : json(nullptr)}};
    const std::string report_json = report.dump(2) + "\n";

    std::string csv = "scale_kind,box,boxes\n";
    for (const char* kind : {"step_scale", "radius_scale"}) {
        const auto& fit = report[kind]["fit"];
        if (!fit.contains("counts")) continue;
        for (const auto& cnt : fit["counts"]) {
            csv += std::string(kind) + "," + std::to_string(cnt["scale"].get<std::size_t>()) + "," +
                   std::to_string(cnt["boxes"].get<std::size_t>()) + "\n";
        }
    }
    outputs.write("dim.json", report_json);
    outputs.write("dim.csv", csv);
    outputs.finish(cfg_json, c.seed);
    out << (c.format == "json" ? report_json : csv);
    for (const char* kind : {"step_scale", "radius_scale"}) {
        const auto& fit = report[kind]["fit"];
        if (fit.contains("dimension")) {
            err << kind << " dimension = " << num(fit["dimension"]["value"].get<double>()) << "\n";
        } else {
            err << kind << ": " << fit["error"].get<std::string>() << "\n";
        }
    }
    if (step_scan.times.empty()) return kStatistical;
    return kOk;
}

// ------------------------------------------------------------------ bounds

int cmd_bounds(const std::string& grid_text, const Common& c, std::ostream& out) {
    const auto grid = parse_grid(grid_text);
    Outputs outputs(c.out_dir, c.command);
    std::string csv = "alpha,wedge_exact,wedge_status,pivot_upper_bound,pivot_status,weak_pivot,weak_pivot_status\n";
    json rows = json::array();
    for (double alpha : grid) {
        const double w = wedge_exponent(alpha), p = pivot_upper_bound(alpha);
        std::optional<double> weak;
        if (alpha <= std::numbers::pi) weak = weak_pivot_conjecture(alpha);
        csv += num(alpha) + "," + num(w) + ",theorem," + num(p) + ",theorem," + (weak ? num(*weak) : "") + "," +
               (weak ? "conjecture" : "") + "\n";
        rows.push_back({{"alpha", alpha},
                        {"wedge_exact", tagged(w, Status::Theorem)},
                        {"pivot_upper_bound", tagged(p, Status::Theorem)},
                        {"weak_pivot", weak ? tagged(*weak, Status::Conjecture) : json(nullptr)}});
    }
    json report = {{"rows", rows},
                   {"pivot_existence_threshold", tagged(pivot_existence_threshold(), Status::Theorem)}};
    const std::string report_json = report.dump(2) + "\n";
    outputs.write("bounds.csv", csv);
    outputs.write("bounds.json", report_json);
    outputs.finish({{"alpha_grid", grid_text}}, c.seed);
    out << (c.format == "json" ? report_json : csv);
    return kOk;
}

// ----------------------------------------------------------- algebra-check

struct AlgebraArgs {
    std::string set;
    std::string samples = "1e6";
    std::string steps = "1e4";
    std::int32_t offset = 2;
};

int cmd_algebra(const AlgebraArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    cfg.set = parse_set_spec(a.set);
    cfg.n_samples = parse_count(a.samples, "--samples");
    cfg.max_steps = parse_count(a.steps, "--steps");
    cfg.offset = a.offset;
    cfg.seed = c.seed;
    cfg.workers = c.workers;
    auto mirror = cfg;
    mirror.set = conjugate(cfg.set);
    // disjoint sample streams keep the two estimates independent
    mirror.first_sample = cfg.n_samples;

    Outputs outputs(c.out_dir, c.command);
    const auto c1 = run_experiment(cfg);
    const auto c2 = run_experiment(mirror);
    outputs.write("curve_set.csv", survival_csv(c1));
    outputs.write("curve_conjugate.csv", survival_csv(c2));
    const auto e1 = fit_exponent(c1, set_adapted_window(c1, cfg.set));
    const auto e2 = fit_exponent(c2, set_adapted_window(c2, mirror.set));
    const double joint = std::hypot(e1.std_error, e2.std_error);
    const double diff = e1.xi_hat - e2.xi_hat;
    const bool consistent = std::abs(diff) <= 2 * joint;
    json report = {{"set", cfg.set.descriptor()},
                   {"conjugate", mirror.set.descriptor()},
                   {"estimate_set", to_json(e1)},
                   {"estimate_conjugate", to_json(e2)},
                   {"difference", diff},
                   {"joint_stderr", joint},
                   {"consistent_within_2_stderr", consistent}};
    const std::string report_json = report.dump(2) + "\n";
    outputs.write("algebra.json", report_json);
    outputs.finish({{"set", to_json(cfg)}, {"conjugate", to_json(mirror)}}, c.seed);
    if (c.format == "json") {
        out << report_json;
    } else {
        out << "set,xi_hat,stderr\n"
            << csv_quote(cfg.set.descriptor()) << "," << num(e1.xi_hat) << "," << num(e1.std_error) << "\n"
            << csv_quote(mirror.set.descriptor()) << "," << num(e2.xi_hat) << "," << num(e2.std_error) << "\n";
    }
    err << "difference " << num(diff) << " (joint stderr " << num(joint) << "): "
        << (consistent ? "consistent" : "INCONSISTENT") << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo and closed-form tools for planar intersection exponents xi(A)"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    common.workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--seed", common.seed, "master seed")->capture_default_str();
    app.add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", common.out_dir, "output directory for data files and manifest.json");
    app.add_option("--format", common.format, "stdout format")->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    EstimateArgs est;
    auto* s_est = app.add_subcommand("estimate", "sample walk pairs and fit xi(A)");
    s_est->add_option("--set", est.set, "multiplier set, e.g. points:1,0+1i")->required();
    s_est->add_option("--samples", est.samples, "number of walk pairs")->capture_default_str();
    s_est->add_option("--steps", est.steps, "walk length")->capture_default_str();
    s_est->add_option("--offset", est.offset, "S2 start (a,0); 0 picks the smallest usable a");
    s_est->add_option("--first-sample", est.first_sample, "index of the first sample (for split runs)");
    s_est->add_option("--batch", est.batch, "samples per work unit")->capture_default_str();
    s_est->add_option("--time-budget", est.time_budget, "seconds; 0 = unlimited (partial output is marked)");
    s_est->add_option("--t-min", est.t_min, "fit window start (default 64 * max|a|^2)");
    s_est->add_option("--t-max", est.t_max, "fit window end (default last populated horizon)");

    Table1Args t1;
    auto* s_t1 = app.add_subcommand("table1", "rerun the four tabulated sets at a fraction of the sample counts");
    s_t1->add_option("--scale", t1.scale, "fraction of the tabulated sample counts, in (0, 1]")
        ->capture_default_str();
    s_t1->add_option("--steps", t1.steps, "walk length")->capture_default_str();
    s_t1->add_option("--offset", t1.offset, "S2 start (a,0)")->capture_default_str();
    s_t1->add_flag("--yes", t1.yes, "confirm runs above 10^8 samples");
    s_t1->add_flag("--dry-run", t1.dry_run, "print the planned runs and exit");

    PivotArgs pv;
    auto* s_pv = app.add_subcommand("pivots", "find times with a large pivot angle on random walks");
    s_pv->add_option("--angle", pv.angle, "required rotation angle (radians)")->capture_default_str();
    s_pv->add_option("--steps", pv.steps, "walk length")->capture_default_str();
    s_pv->add_option("--scale", pv.scale, "eps:R in steps")->capture_default_str();
    s_pv->add_option("--resolution", pv.resolution, "angular grid (default angle/5)");
    s_pv->add_option("--walks", pv.walks, "independent walks")->capture_default_str();
    s_pv->add_option("--stride", pv.stride, "time grid stride (default: at most 10^5 positions)");
    s_pv->add_flag("--no-cap", pv.no_cap, "measure the full maximal angle instead of stopping at --angle");

    DimArgs dm;
    auto* s_dm = app.add_subcommand("dim", "box-counting dimension of the exceptional time set");
    s_dm->add_option("--set", dm.set, "multiplier set")->capture_default_str();
    s_dm->add_option("--steps", dm.steps, "walk length")->capture_default_str();
    s_dm->add_option("--scale", dm.scale, "eps:R in steps (default 1:steps/100)");
    s_dm->add_option("--radius-scale", dm.radius_scale, "eps:R as radii (default square roots of --scale)");
    s_dm->add_option("--stride", dm.stride, "time grid stride")->capture_default_str();
    s_dm->add_option("--scales", dm.scales, "comma-separated box sizes (default 2^4 .. 2^(log2(steps)/2))");
    s_dm->add_flag("--times", dm.times, "include the time lists in the JSON report");

    std::string grid = "0:3.1:0.1";
    auto* s_bd = app.add_subcommand("bounds", "tabulate exact exponents, bounds and conjectures over angles");
    s_bd->add_option("--alpha-grid", grid, "start:stop:step in radians")->capture_default_str();

    AlgebraArgs al;
    auto* s_al = app.add_subcommand("algebra-check", "compare the estimates for A and its conjugate");
    s_al->add_option("--set", al.set, "multiplier set")->required();
    s_al->add_option("--samples", al.samples, "walk pairs per set")->capture_default_str();
    s_al->add_option("--steps", al.steps, "walk length")->capture_default_str();
    s_al->add_option("--offset", al.offset, "S2 start (a,0)")->capture_default_str();

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    if (argv.empty()) argv.push_back("xi");
    for (std::size_t i = 0; i < args.size(); ++i) common.command += (i ? " " : "") + args[i];

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (s_est->parsed()) return cmd_estimate(est, common, out, err);
        if (s_t1->parsed()) return cmd_table1(t1, common, out, err);
        if (s_pv->parsed()) return cmd_pivots(pv, common, out, err);
        if (s_dm->parsed()) return cmd_dim(dm, common, out, err);
        if (s_bd->parsed()) return cmd_bounds(grid, common, out);
        if (s_al->parsed()) return cmd_algebra(al, common, out, err);
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const StatisticalError& e) {
        err << "statistical failure: " << e.what() << "\n";
        return kStatistical;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace xi::cli
