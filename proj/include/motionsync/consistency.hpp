#pragma once

// Self-contained accuracy check: warp a reference motion by a known random
// reparameterization, align the warped clip back to the reference, and
// measure the mean L1 gap between the recovered warp and the exact inverse.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "motionsync/align.hpp"
#include "motionsync/motion.hpp"
#include "motionsync/warp.hpp"

namespace motionsync {

struct ConsistencyOutcome {
    double l1_error_percent = 0.0;
    AlignmentResult result;
    Diffeomorphism applied;    // phi
    Diffeomorphism recovered;  // should approximate invert(phi)
};

/// Property-3 harness: align apply_warp(m, phi) to m and compare the
/// recovered warp against phi^{-1}.
inline ConsistencyOutcome consistency_check(const Motion& m, const AlignOptions& opt,
                                            const DiffeoSpec& spec, int out_frames) {
    ConsistencyOutcome outcome;
    outcome.applied = random_diffeo(spec);
    const Motion warped = apply_warp(m, outcome.applied, out_frames);
    outcome.result = align_motions(warped, m, opt);
    outcome.recovered = outcome.result.warp;
    outcome.l1_error_percent = l1_distance(outcome.recovered, invert(outcome.applied));
    return outcome;
}

struct ExperimentRecord {
    int frame_count = 0;
    double l1_error_percent = 0.0;
    double wall_time_ms = 0.0;
    std::int64_t cells_visited = 0;
    bool failed = false;
    std::string error;
};

struct ConsistencyReport {
    std::string method;
    std::string anchoring;
    std::vector<ExperimentRecord> per_experiment;
    double mean_l1_error_percent = 0.0;
    double mean_wall_time_ms = 0.0;
};

struct BenchmarkConfig {
    std::vector<Method> methods{Method::keyframes, Method::srvt_r3, Method::gram, Method::frenet,
                                Method::sphere_srv};
    int n_experiments = 7;
    int frames_min = 50;
    int frames_max = 185;
    std::uint64_t master_seed = 0;
    double tolerance_frac = 0.05;  // anchored window as a fraction of the frame count
    int n_basis = 8;
    double max_slope_ratio = 4.0;
    CombineMethod combine = CombineMethod::weighted_mean;
    int smooth_window = 1;
};

namespace detail {

inline void finalize_means(ConsistencyReport& report) {
    double err = 0.0, time = 0.0;
    int ok = 0;
    for (const auto& rec : report.per_experiment) {
        if (rec.failed) continue;
        err += rec.l1_error_percent;
        time += rec.wall_time_ms;
        ++ok;
    }
    report.mean_l1_error_percent = ok > 0 ? err / ok : std::nan("");
    report.mean_wall_time_ms = ok > 0 ? time / ok : std::nan("");
}

}  // namespace detail

/// One report per (method, anchoring) pair; the keyframe baseline has no
/// anchored variant. Frame counts and warps are drawn once from the master
/// seed and shared across methods, so the error columns are comparable.
/// Wall time covers align_motions only.
inline std::vector<ConsistencyReport> benchmark_suite(const Motion& m,
                                                      const BenchmarkConfig& cfg) {
    if (cfg.n_experiments < 1) throw std::invalid_argument("need at least one experiment");
    if (cfg.frames_min < 4 || cfg.frames_max < cfg.frames_min)
        throw std::invalid_argument("invalid frame range");

    std::mt19937_64 master(cfg.master_seed);
    std::vector<int> frame_counts(static_cast<std::size_t>(cfg.n_experiments));
    std::vector<std::uint64_t> warp_seeds(frame_counts.size());
    for (int e = 0; e < cfg.n_experiments; ++e) {
        frame_counts[size_t(e)] = detail::uniform_int(master, cfg.frames_min, cfg.frames_max);
        warp_seeds[size_t(e)] = master();
    }

    std::vector<Motion> references;
    references.reserve(frame_counts.size());
    for (int frames : frame_counts) {
        std::vector<double> grid(static_cast<std::size_t>(frames));
        for (int i = 0; i < frames; ++i) grid[size_t(i)] = double(i) / (frames - 1);
        references.push_back(resample(m, grid));
    }

    std::vector<ConsistencyReport> reports;
    for (Method method : cfg.methods) {
        const bool baseline = (method == Method::keyframes);
        const std::vector<AnchoringSpec::Kind> variants =
            baseline ? std::vector<AnchoringSpec::Kind>{AnchoringSpec::Kind::none}
                     : std::vector<AnchoringSpec::Kind>{AnchoringSpec::Kind::none,
                                                        AnchoringSpec::Kind::keyframes};
        for (AnchoringSpec::Kind kind : variants) {
            ConsistencyReport report;
            report.method = method_name(method);
            report.anchoring = anchoring_name(kind);
            for (int e = 0; e < cfg.n_experiments; ++e) {
                const int frames = frame_counts[size_t(e)];
                AlignOptions opt;
                opt.method = method;
                opt.combine = cfg.combine;
                opt.anchoring.kind = kind;
                opt.anchoring.tolerance_frames =
                    static_cast<int>(std::ceil(cfg.tolerance_frac * frames));
                opt.anchoring.smooth_window = cfg.smooth_window;
                ExperimentRecord rec;
                rec.frame_count = frames;
                try {
                    const ConsistencyOutcome outcome =
                        consistency_check(references[size_t(e)], opt,
                                          {warp_seeds[size_t(e)], cfg.n_basis,
                                           cfg.max_slope_ratio},
                                          frames);
                    rec.l1_error_percent = outcome.l1_error_percent;
                    rec.wall_time_ms = outcome.result.wall_time_ms;
                    rec.cells_visited = outcome.result.cells_visited;
                } catch (const std::exception& e_) {
                    rec.failed = true;
                    rec.error = e_.what();
                }
                report.per_experiment.push_back(std::move(rec));
            }
            detail::finalize_means(report);
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

inline nlohmann::json report_to_json(const ConsistencyReport& report) {
    nlohmann::json doc;
    doc["method"] = report.method;
    doc["anchoring"] = report.anchoring;
    doc["mean_l1_error_percent"] = report.mean_l1_error_percent;
    doc["mean_wall_time_ms"] = report.mean_wall_time_ms;
    doc["per_experiment"] = nlohmann::json::array();
    for (const auto& rec : report.per_experiment) {
        nlohmann::json row;
        row["frame_count"] = rec.frame_count;
        row["l1_error_percent"] = rec.l1_error_percent;
        row["wall_time_ms"] = rec.wall_time_ms;
        row["cells_visited"] = rec.cells_visited;
        row["failed"] = rec.failed;
        if (rec.failed) row["error"] = rec.error;
        doc["per_experiment"].push_back(std::move(row));
    }
    return doc;
}

inline nlohmann::json reports_to_json(const std::vector<ConsistencyReport>& reports) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& report : reports) doc.push_back(report_to_json(report));
    return doc;
}

namespace detail {

inline std::string display_method(const std::string& method) {
    if (method == "srvt_r3") return "SRVT in R^3";
    if (method == "gram") return "Gram matrices";
    if (method == "frenet") return "Moving frames";
    if (method == "sphere_srv") return "SRVT on S^2";
    if (method == "keyframes") return "Keyframes";
    return method;
}

inline std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v);
    return buf;
}

inline std::string format_ms(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f ms", v);
    return buf;
}

}  // namespace detail

/// Markdown table: one row per method, error/time columns for the plain and
/// anchored solvers, keyframe baseline as a footer line.
inline std::string reports_to_markdown(const std::vector<ConsistencyReport>& reports) {
    const auto find = [&](const std::string& method,
                          const std::string& anchoring) -> const ConsistencyReport* {
        for (const auto& r : reports)
            if (r.method == method && r.anchoring == anchoring) return &r;
        return nullptr;
    };
    std::string out;
    out += "| Method | Error with DP | Time with DP | Error with ADP | Time with ADP |\n";
    out += "|---|---|---|---|---|\n";
    for (const std::string method : {"srvt_r3", "gram", "frenet", "sphere_srv"}) {
        const ConsistencyReport* dp = find(method, "none");
        const ConsistencyReport* adp = find(method, "keyframes");
        if (!dp && !adp) continue;
        out += "| L1-Error " + detail::display_method(method) + " | ";
        out += (dp ? detail::format_percent(dp->mean_l1_error_percent) : "-");
        out += " | ";
        out += (dp ? detail::format_ms(dp->mean_wall_time_ms) : "-");
        out += " | ";
        out += (adp ? detail::format_percent(adp->mean_l1_error_percent) : "-");
        out += " | ";
        out += (adp ? detail::format_ms(adp->mean_wall_time_ms) : "-");
        out += " |\n";
    }
    if (const ConsistencyReport* base = find("keyframes", "none")) {
        out += "\nBaseline: L1-Error keyframe alignment = " +
               detail::format_percent(base->mean_l1_error_percent) +
               ", computational time = " + detail::format_ms(base->mean_wall_time_ms) + "\n";
    }
    return out;
}

}  // namespace motionsync
