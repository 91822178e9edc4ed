#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "motionsync/align.hpp"
#include "motionsync/consistency.hpp"
#include "motionsync/io.hpp"
#include "motionsync/plot.hpp"
#include "motionsync/synth.hpp"

namespace motionsync {

inline nlohmann::json alignment_result_to_json(const AlignmentResult& r) {
    nlohmann::json doc;
    doc["total_cost"] = r.total_cost;
    doc["cells_visited"] = r.cells_visited;
    doc["wall_time_ms"] = r.wall_time_ms;
    doc["fallback_unanchored"] = r.fallback_unanchored;
    doc["warp"] = warp_to_json(r.warp);
    doc["path"] = path_to_json(r.path);
    return doc;
}

namespace cli_detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline std::vector<int> parse_joint_list(const Motion& m, const std::string& csv) {
    std::vector<int> out;
    for (const auto& raw : detail::split(csv, ',')) {
        const std::string token = trim(raw);
        if (token.empty()) continue;
        if (std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
            out.push_back(std::stoi(token));
        else
            out.push_back(m.topology.joint_index(token));
    }
    if (out.empty()) throw std::runtime_error("empty joint list");
    return out;
}

inline std::vector<double> parse_weight_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& raw : detail::split(csv, ','))
        if (!trim(raw).empty()) out.push_back(detail::parse_double(trim(raw)));
    return out;
}

inline std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (c == ' ' || c == '/' || c == ',') c = '_';
    return out;
}

inline int resolve_tolerance(int anchor_tolerance, double tolerance_frac, int frames) {
    if (anchor_tolerance >= 0) return anchor_tolerance;
    return static_cast<int>(std::ceil(tolerance_frac * frames));
}

inline void dump_features(const std::string& prefix, const std::string& tag, const Motion& m,
                          Method method, const std::vector<int>& joints) {
    const auto file = [&](const std::string& stem) {
        return prefix + "_" + tag + "_" + method_name(method) + stem + ".csv";
    };
    if (method == Method::gram) {
        const GramSequence g = gram_sequence(m, joints);
        std::string out = "t";
        const auto n = g.gram.front().rows();
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                out += ",g" + std::to_string(r) + std::to_string(c);
        out += "\n";
        for (std::size_t f = 0; f < g.gram.size(); ++f) {
            out += detail::format_double(g.times[f]);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    out += "," + detail::format_double(g.gram[f](r, c));
            out += "\n";
        }
        write_file(file(""), out);
        return;
    }
    std::vector<Eigen::Vector3d> center;
    if (method == Method::sphere_srv) center = detail::body_center_track(m);
    for (int joint : joints) {
        const std::string stem = "_" + sanitize(m.topology.joint_names[size_t(joint)]);
        std::string out;
        switch (method) {
            case Method::srvt_r3: {
                const SrvCurve srv = srvt_r3(joint_trajectory(m, joint), m.times);
                out = "t,qx,qy,qz\n";
                for (std::size_t i = 0; i < srv.q.size(); ++i)
                    out += detail::format_double(srv.times[i]) + "," +
                           detail::format_double(srv.q[i].x()) + "," +
                           detail::format_double(srv.q[i].y()) + "," +
                           detail::format_double(srv.q[i].z()) + "\n";
                break;
            }
            case Method::frenet: {
                const FrenetData fd = frenet_frames(joint_trajectory(m, joint), m.times);
                out = "t,arclength,kappa,tau,torsion_defined\n";
                for (std::size_t r = 0; r < fd.curvature.size(); ++r)
                    out += detail::format_double(fd.times[r]) + "," +
                           detail::format_double(fd.arclength[r]) + "," +
                           detail::format_double(fd.curvature[r]) + "," +
                           detail::format_double(fd.torsion[r]) + "," +
                           std::to_string(int(fd.torsion_defined[r])) + "\n";
                break;
            }
            case Method::sphere_srv: {
                const SphereCurve sc =
                    make_sphere_curve(joint_trajectory(m, joint), center, m.times);
                out = "t,ux,uy,uz\n";
                for (std::size_t i = 0; i < sc.u.size(); ++i)
                    out += detail::format_double(sc.times[i]) + "," +
                           detail::format_double(sc.u[i].x()) + "," +
                           detail::format_double(sc.u[i].y()) + "," +
                           detail::format_double(sc.u[i].z()) + "\n";
                break;
            }
            case Method::keyframes: {
                const std::vector<double> z = joint_z_signal(m, joint);
                out = "t,z\n";
                for (std::size_t f = 0; f < z.size(); ++f)
                    out += detail::format_double(m.times[f]) + "," + detail::format_double(z[f]) +
                           "\n";
                break;
            }
            default:
                break;
        }
        write_file(file(stem), out);
    }
}

}  // namespace cli_detail

/// Command-line driver; args exclude the program name.
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible-anchor
/// warning escalated by --strict.
inline int run(std::vector<std::string> args) {
    CLI::App app{"temporal alignment of skeletal motion sequences"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- convert ----------------------------------------------------------
    auto* convert = app.add_subcommand("convert", "re-encode a motion between JSON and CSV");
    struct {
        std::string in, out;
    } conv;
    convert->add_option("--in", conv.in, "input motion (.json or .csv)")->required();
    convert->add_option("--out", conv.out, "output motion (.json or .csv)")->required();
    convert->callback([&] { save_motion_file(conv.out, load_motion_file(conv.in)); });

    // ---- synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate the synthetic arm-swing motion");
    struct {
        int frames = 100;
        std::uint64_t seed = 0;
        double noise = 0.0;
        std::string out;
        SwingProfile profile;
    } sy;
    synth->add_option("--frames", sy.frames, "frame count");
    synth->add_option("--seed", sy.seed, "noise seed");
    synth->add_option("--noise", sy.noise, "uniform noise scale in meters");
    synth->add_option("--out", sy.out, "output motion file")->required();
    synth->add_option("--elevation-amp", sy.profile.elevation_amp);
    synth->add_option("--azimuth-amp", sy.profile.azimuth_amp);
    synth->add_option("--azimuth-phase", sy.profile.azimuth_phase);
    synth->add_option("--twist-amp", sy.profile.twist_amp);
    synth->add_option("--twist-phase", sy.profile.twist_phase);
    synth->add_option("--leg-amp", sy.profile.leg_amp);
    synth->add_option("--leg-phase", sy.profile.leg_phase);
    synth->add_option("--sway-amp", sy.profile.sway_amp);
    synth->add_option("--sway-phase", sy.profile.sway_phase);
    synth->callback([&] {
        save_motion_file(sy.out, synth_motion({sy.frames, sy.profile, sy.noise, sy.seed}));
    });

    // ---- keyframes --------------------------------------------------------
    auto* keyframes_cmd = app.add_subcommand("keyframes", "detect elevation keyframes per joint");
    struct {
        std::string in, joints, out;
        int smooth_window = 1;
    } kf;
    keyframes_cmd->add_option("--in", kf.in, "motion file")->required();
    keyframes_cmd->add_option("--joints", kf.joints, "comma-separated joint names or indices");
    keyframes_cmd->add_option("--smooth-window", kf.smooth_window, "moving-average window");
    keyframes_cmd->add_option("--out", kf.out, "output JSON (stdout when omitted)");
    keyframes_cmd->callback([&] {
        const Motion m = load_motion_file(kf.in);
        const std::vector<int> joints = kf.joints.empty()
                                            ? detail::default_arm_joints(m)
                                            : cli_detail::parse_joint_list(m, kf.joints);
        nlohmann::json doc;
        for (int joint : joints) {
            const Keyframes k = detect_keyframes(joint_z_signal(m, joint), kf.smooth_window);
            doc[m.topology.joint_names[size_t(joint)]] = {
                {"high1", k.high1}, {"low", k.low}, {"high2", k.high2}};
        }
        if (kf.out.empty())
            std::cout << doc.dump(2) << "\n";
        else
            write_file(kf.out, doc.dump(2) + "\n");
    });

    // ---- align ------------------------------------------------------------
    auto* align = app.add_subcommand("align", "align an input motion to a reference");
    struct {
        std::string in, ref, method = "srvt_r3", joints, weights, combine = "weighted_mean";
        std::string anchoring = "none";
        double tolerance_frac = 0.05;
        int anchor_tolerance = -1;
        int smooth_window = 1;
        double lambda_tau = 1.0;
        std::string out, result, path_out, dump_features;
        bool strict = false;
    } al;
    align->add_option("--in", al.in, "input motion")->required();
    align->add_option("--ref", al.ref, "reference motion")->required();
    align->add_option("--method", al.method,
                      "keyframes | srvt_r3 | gram | frenet | sphere_srv");
    align->add_option("--joints", al.joints, "joints to align (names or indices)");
    align->add_option("--weights", al.weights, "per-joint weights for the combination");
    align->add_option("--combine", al.combine, "weighted_mean | median");
    align->add_option("--anchoring", al.anchoring, "none | keyframes");
    align->add_option("--tolerance-frac", al.tolerance_frac,
                      "anchor tolerance as a fraction of the frame count");
    align->add_option("--anchor-tolerance", al.anchor_tolerance,
                      "anchor tolerance in frames (overrides --tolerance-frac)");
    align->add_option("--smooth-window", al.smooth_window, "keyframe pre-smoothing window");
    align->add_option("--lambda-tau", al.lambda_tau, "torsion weight for the frenet cost");
    align->add_option("--out", al.out, "write the recovered warp JSON here");
    align->add_option("--result", al.result, "write the full alignment result JSON here");
    align->add_option("--path-out", al.path_out, "write the frame correspondence (.json or .csv)");
    align->add_option("--dump-features", al.dump_features, "prefix for per-frame feature CSVs");
    align->add_flag("--strict", al.strict, "escalate infeasible-anchor fallback to exit 3");
    align->callback([&] {
        const Motion m_in = load_motion_file(al.in);
        const Motion m_ref = load_motion_file(al.ref);
        AlignOptions opt;
        opt.method = method_from_name(al.method);
        if (!al.joints.empty()) opt.joints = cli_detail::parse_joint_list(m_in, al.joints);
        if (!al.weights.empty()) opt.joint_weights = cli_detail::parse_weight_list(al.weights);
        if (al.combine == "weighted_mean")
            opt.combine = CombineMethod::weighted_mean;
        else if (al.combine == "median")
            opt.combine = CombineMethod::median;
        else
            throw std::runtime_error("unknown combine '" + al.combine + "'");
        if (al.anchoring == "keyframes") {
            opt.anchoring.kind = AnchoringSpec::Kind::keyframes;
            opt.anchoring.tolerance_frames = cli_detail::resolve_tolerance(
                al.anchor_tolerance, al.tolerance_frac,
                std::max(m_in.frame_count(), m_ref.frame_count()));
        } else if (al.anchoring != "none") {
            throw std::runtime_error("unknown anchoring '" + al.anchoring + "'");
        }
        opt.anchoring.smooth_window = al.smooth_window;
        opt.lambda_tau = al.lambda_tau;

        const AlignmentResult r = align_motions(m_in, m_ref, opt);
        if (!al.out.empty()) write_file(al.out, warp_to_json(r.warp).dump(2) + "\n");
        if (!al.result.empty())
            write_file(al.result, alignment_result_to_json(r).dump(2) + "\n");
        if (!al.path_out.empty()) {
            if (al.path_out.size() >= 4 &&
                al.path_out.compare(al.path_out.size() - 4, 4, ".csv") == 0)
                write_file(al.path_out, path_to_csv(r.path));
            else
                write_file(al.path_out, path_to_json(r.path).dump() + "\n");
        }
        if (!al.dump_features.empty()) {
            const std::vector<int> joints = opt.joints.empty()
                                                ? detail::default_method_joints(m_in, opt.method)
                                                : opt.joints;
            cli_detail::dump_features(al.dump_features, "in", m_in, opt.method, joints);
            cli_detail::dump_features(al.dump_features, "ref", m_ref, opt.method, joints);
        }
        if (al.out.empty() && al.result.empty())
            std::cout << alignment_result_to_json(r).dump(2) << "\n";
        if (r.fallback_unanchored) {
            std::cerr << "warning: infeasible anchors, fell back to plain alignment\n";
            if (al.strict) exit_code = 3;
        }
    });

    // ---- reparam ----------------------------------------------------------
    auto* reparam = app.add_subcommand("reparam", "apply a time warp to a motion");
    struct {
        std::string in, out, warp, warp_out;
        int frames = 0;
        std::uint64_t seed = 0;
        int n_basis = 8;
        double max_slope_ratio = 4.0;
    } rp;
    reparam->add_option("--in", rp.in, "input motion")->required();
    reparam->add_option("--out", rp.out, "output motion")->required();
    reparam->add_option("--frames", rp.frames, "output frame count (default: input count)");
    reparam->add_option("--warp", rp.warp, "warp JSON to apply (otherwise generated)");
    reparam->add_option("--seed", rp.seed, "seed for the generated warp");
    reparam->add_option("--n-basis", rp.n_basis, "density steps of the generated warp");
    reparam->add_option("--max-slope-ratio", rp.max_slope_ratio, "slope-ratio bound");
    reparam->add_option("--warp-out", rp.warp_out, "write the warp that was applied");
    reparam->callback([&] {
        const Motion m = load_motion_file(rp.in);
        const Diffeomorphism phi =
            rp.warp.empty()
                ? random_diffeo({rp.seed, rp.n_basis, rp.max_slope_ratio})
                : warp_from_json(nlohmann::json::parse(read_file(rp.warp)));
        const int frames = rp.frames > 0 ? rp.frames : m.frame_count();
        save_motion_file(rp.out, apply_warp(m, phi, frames));
        if (!rp.warp_out.empty()) write_file(rp.warp_out, warp_to_json(phi).dump(2) + "\n");
    });

    // ---- check ------------------------------------------------------------
    auto* check = app.add_subcommand("check", "consistency check against a known warp");
    struct {
        std::string method = "srvt_r3", in, anchoring = "none", out;
        int frames = 0;
        std::uint64_t seed = 0;
        int n_basis = 8;
        double max_slope_ratio = 4.0;
        double tolerance_frac = 0.05;
        int smooth_window = 1;
        bool strict = false;
    } ck;
    check->add_option("--method", ck.method, "alignment method to test");
    check->add_option("--in", ck.in, "reference motion (bundled synthetic when omitted)");
    check->add_option("--frames", ck.frames, "frames of the reparameterized input");
    check->add_option("--seed", ck.seed, "seed of the hidden warp");
    check->add_option("--n-basis", ck.n_basis, "density steps of the hidden warp");
    check->add_option("--max-slope-ratio", ck.max_slope_ratio, "slope-ratio bound");
    check->add_option("--anchoring", ck.anchoring, "none | keyframes (also runs unanchored)");
    check->add_option("--tolerance-frac", ck.tolerance_frac, "anchor tolerance fraction");
    check->add_option("--smooth-window", ck.smooth_window, "keyframe pre-smoothing window");
    check->add_option("--out", ck.out, "report JSON path (stdout when omitted)");
    check->add_flag("--strict", ck.strict, "escalate fallback warnings to exit 3");
    check->callback([&] {
        const Motion m = ck.in.empty() ? synth_motion({120, {}, 0.0, 1}) : load_motion_file(ck.in);
        const int frames = ck.frames > 0 ? ck.frames : m.frame_count();
        AlignOptions opt;
        opt.method = method_from_name(ck.method);
        opt.anchoring.smooth_window = ck.smooth_window;
        const DiffeoSpec spec{ck.seed, ck.n_basis, ck.max_slope_ratio};

        nlohmann::json doc;
        doc["method"] = ck.method;
        doc["frames"] = frames;
        bool fallback = false;
        const auto record = [&](const ConsistencyOutcome& outcome) {
            nlohmann::json entry;
            entry["l1_error_percent"] = outcome.l1_error_percent;
            entry["cells_visited"] = outcome.result.cells_visited;
            entry["wall_time_ms"] = outcome.result.wall_time_ms;
            entry["fallback_unanchored"] = outcome.result.fallback_unanchored;
            fallback = fallback || outcome.result.fallback_unanchored;
            return entry;
        };
        doc["unanchored"] = record(consistency_check(m, opt, spec, frames));
        if (ck.anchoring == "keyframes") {
            AlignOptions anchored = opt;
            anchored.anchoring.kind = AnchoringSpec::Kind::keyframes;
            anchored.anchoring.tolerance_frames =
                cli_detail::resolve_tolerance(-1, ck.tolerance_frac, frames);
            doc["anchored"] = record(consistency_check(m, anchored, spec, frames));
        } else if (ck.anchoring != "none") {
            throw std::runtime_error("unknown anchoring '" + ck.anchoring + "'");
        }
        if (ck.out.empty())
            std::cout << doc.dump(2) << "\n";
        else
            write_file(ck.out, doc.dump(2) + "\n");
        if (fallback) {
            std::cerr << "warning: infeasible anchors, fell back to plain alignment\n";
            if (ck.strict) exit_code = 3;
        }
    });

    // ---- bench ------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "consistency benchmark over all methods");
    struct {
        std::string in, methods, out, json;
        std::uint64_t seed = 0;
        int experiments = 7;
        int frames_min = 50, frames_max = 185;
        double tolerance_frac = 0.05;
        int n_basis = 8;
        double max_slope_ratio = 4.0;
        bool strict = false;
    } be;
    bench->add_option("--in", be.in, "base motion (bundled synthetic when omitted)");
    bench->add_option("--methods", be.methods, "comma-separated method subset");
    bench->add_option("--seed", be.seed, "master seed");
    bench->add_option("--experiments", be.experiments, "experiments per report");
    bench->add_option("--frames-min", be.frames_min, "minimum frame count");
    bench->add_option("--frames-max", be.frames_max, "maximum frame count");
    bench->add_option("--tolerance-frac", be.tolerance_frac, "anchored tolerance fraction");
    bench->add_option("--n-basis", be.n_basis, "density steps of the hidden warps");
    bench->add_option("--max-slope-ratio", be.max_slope_ratio, "slope-ratio bound");
    bench->add_option("--out", be.out, "markdown report path (stdout when omitted)");
    bench->add_option("--json", be.json, "machine-readable report path");
    bench->add_flag("--strict", be.strict, "escalate failed experiments to exit 3");
    bench->callback([&] {
        const Motion m = be.in.empty() ? synth_motion({200, {}, 0.0, 1}) : load_motion_file(be.in);
        BenchmarkConfig cfg;
        if (!be.methods.empty()) {
            cfg.methods.clear();
            for (const auto& token : detail::split(be.methods, ','))
                if (!cli_detail::trim(token).empty())
                    cfg.methods.push_back(method_from_name(cli_detail::trim(token)));
        }
        cfg.master_seed = be.seed;
        cfg.n_experiments = be.experiments;
        cfg.frames_min = be.frames_min;
        cfg.frames_max = be.frames_max;
        cfg.tolerance_frac = be.tolerance_frac;
        cfg.n_basis = be.n_basis;
        cfg.max_slope_ratio = be.max_slope_ratio;
        const std::vector<ConsistencyReport> reports = benchmark_suite(m, cfg);
        const std::string markdown = reports_to_markdown(reports);
        if (be.out.empty())
            std::cout << markdown;
        else
            write_file(be.out, markdown);
        if (!be.json.empty()) write_file(be.json, reports_to_json(reports).dump(2) + "\n");
        bool any_failed = false;
        for (const auto& report : reports)
            for (const auto& rec : report.per_experiment) any_failed |= rec.failed;
        if (any_failed) {
            std::cerr << "warning: some experiments failed; see the report\n";
            if (be.strict) exit_code = 3;
        }
    });

    // ---- plot -------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "export warp/correspondence/elevation/energy plots");
    struct {
        std::string kind, out, warp, path, in, ref, joint;
        std::string method = "srvt_r3", anchoring = "none", path_out;
        double tolerance_frac = 0.05;
    } pl;
    plot->add_option("--kind", pl.kind, "warp | correspondence | elevation | energy")->required();
    plot->add_option("--out", pl.out, "output file (.csv or .svg; energy is CSV only)")
        ->required();
    plot->add_option("--warp", pl.warp, "warp JSON (kinds: warp, elevation)");
    plot->add_option("--path", pl.path, "correspondence JSON (kind: correspondence)");
    plot->add_option("--in", pl.in, "input motion (kinds: elevation, energy)");
    plot->add_option("--ref", pl.ref, "reference motion (kinds: elevation, energy)");
    plot->add_option("--joint", pl.joint, "joint for elevation plots");
    plot->add_option("--method", pl.method, "cost method for energy plots");
    plot->add_option("--anchoring", pl.anchoring, "none | keyframes (energy plots)");
    plot->add_option("--tolerance-frac", pl.tolerance_frac, "anchor tolerance fraction");
    plot->add_option("--path-out", pl.path_out, "optimal path CSV for energy plots");
    plot->callback([&] {
        const bool svg = pl.out.size() >= 4 && pl.out.compare(pl.out.size() - 4, 4, ".svg") == 0;
        PlotDocument doc;
        if (pl.kind == "warp") {
            if (pl.warp.empty()) throw std::runtime_error("plot --kind warp needs --warp");
            const Diffeomorphism phi = warp_from_json(nlohmann::json::parse(read_file(pl.warp)));
            PlotSeries s{"warp", {}};
            for (std::size_t k = 0; k < phi.knots().size(); ++k)
                s.points.push_back({phi.knots()[k], phi.values()[k]});
            doc.series.push_back(std::move(s));
            doc.x_label = "t";
            doc.y_label = "warp(t)";
            validate_plot(doc, true);
        } else if (pl.kind == "correspondence") {
            if (pl.path.empty())
                throw std::runtime_error("plot --kind correspondence needs --path");
            const FrameCorrespondence p = path_from_json(nlohmann::json::parse(read_file(pl.path)));
            PlotSeries s{"correspondence", {}};
            for (const auto& pair : p.pairs)
                s.points.push_back({double(pair[0]), double(pair[1])});
            doc.series.push_back(std::move(s));
            doc.x_label = "input frame";
            doc.y_label = "reference frame";
            validate_plot(doc, false);
        } else if (pl.kind == "elevation") {
            if (pl.in.empty()) throw std::runtime_error("plot --kind elevation needs --in");
            const Motion m_in = load_motion_file(pl.in);
            const int joint = pl.joint.empty()
                                  ? detail::default_arm_joints(m_in).front()
                                  : cli_detail::parse_joint_list(m_in, pl.joint).front();
            const auto z_series = [&](const Motion& m, const std::string& name) {
                PlotSeries s{name, {}};
                const std::vector<double> z = joint_z_signal(m, joint);
                for (std::size_t f = 0; f < z.size(); ++f) s.points.push_back({m.times[f], z[f]});
                return s;
            };
            doc.series.push_back(z_series(m_in, "input"));
            if (!pl.ref.empty()) {
                const Motion m_ref = load_motion_file(pl.ref);
                doc.series.push_back(z_series(m_ref, "reference"));
                if (!pl.warp.empty()) {
                    const Diffeomorphism psi =
                        warp_from_json(nlohmann::json::parse(read_file(pl.warp)));
                    doc.series.push_back(
                        z_series(apply_warp(m_in, psi, m_ref.frame_count()), "aligned"));
                }
            }
            doc.x_label = "t";
            doc.y_label = "z";
            validate_plot(doc, false);
        } else if (pl.kind == "energy") {
            if (svg) throw std::runtime_error("energy landscapes export as CSV only");
            if (pl.in.empty() || pl.ref.empty())
                throw std::runtime_error("plot --kind energy needs --in and --ref");
            const Motion m_in = load_motion_file(pl.in);
            const Motion m_ref = load_motion_file(pl.ref);
            const Method method = method_from_name(pl.method);
            detail::JointProblem problem;
            if (method == Method::gram) {
                const std::vector<int> joints = detail::default_method_joints(m_in, method);
                const GramSequence a = gram_sequence(m_in, joints);
                const GramSequence b = gram_sequence(m_ref, joints);
                problem.cost = gram_cost(a, b);
                problem.times_in = a.times;
                problem.times_ref = b.times;
            } else {
                const int joint = detail::default_method_joints(m_in, method).front();
                problem = detail::build_problem(m_in, m_ref, method, joint,
                                                detail::body_center_track(m_in),
                                                detail::body_center_track(m_ref), 1.0);
            }
            DpLandscape landscape;
            AlignmentResult solved;
            if (pl.anchoring == "keyframes") {
                const auto pairs = detail::keyframe_anchor_pairs(
                    m_in, m_ref, detail::default_arm_joints(m_in), 1);
                const int w = cli_detail::resolve_tolerance(
                    -1, pl.tolerance_frac, std::max(m_in.frame_count(), m_ref.frame_count()));
                solved = anchored_dtw(problem.cost, problem.cost.rows, problem.cost.cols,
                                      detail::map_anchors(pairs, m_in, m_ref, problem, w),
                                      &landscape);
            } else {
                solved = dtw(problem.cost, problem.cost.rows, problem.cost.cols, &landscape);
            }
            write_file(pl.out, landscape_to_csv(landscape));
            if (!pl.path_out.empty()) write_file(pl.path_out, path_to_csv(solved.path));
            return;
        } else {
            throw std::runtime_error("unknown plot kind '" + pl.kind + "'");
        }
        write_file(pl.out, svg ? plot_to_svg(doc) : plot_to_csv(doc));
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage diagnostic
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace motionsync
