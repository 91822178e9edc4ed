#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "motionsync/detail/parallel.hpp"
#include "motionsync/dp.hpp"
#include "motionsync/features/frenet.hpp"
#include "motionsync/features/gram.hpp"
#include "motionsync/features/sphere.hpp"
#include "motionsync/features/srvt.hpp"
#include "motionsync/keyframes.hpp"
#include "motionsync/motion.hpp"
#include "motionsync/synth.hpp"
#include "motionsync/warp.hpp"

namespace motionsync {

enum class Method { keyframes, srvt_r3, gram, frenet, sphere_srv };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::keyframes: return "keyframes";
        case Method::srvt_r3: return "srvt_r3";
        case Method::gram: return "gram";
        case Method::frenet: return "frenet";
        case Method::sphere_srv: return "sphere_srv";
    }
    return "?";
}

inline Method method_from_name(const std::string& name) {
    for (Method m : {Method::keyframes, Method::srvt_r3, Method::gram, Method::frenet,
                     Method::sphere_srv})
        if (method_name(m) == name) return m;
    throw std::invalid_argument("unknown method '" + name + "'");
}

struct AnchoringSpec {
    enum class Kind { none, keyframes };
    Kind kind = Kind::none;
    int tolerance_frames = 0;  // Chebyshev window, in grid cells
    int smooth_window = 1;     // pre-smoothing for keyframe detection
};

inline std::string anchoring_name(AnchoringSpec::Kind kind) {
    return kind == AnchoringSpec::Kind::none ? "none" : "keyframes";
}

struct AlignOptions {
    Method method = Method::srvt_r3;
    std::vector<int> joints;            // empty = per-method defaults
    std::vector<double> joint_weights;  // empty = uniform
    CombineMethod combine = CombineMethod::weighted_mean;
    AnchoringSpec anchoring;
    double lambda_tau = 1.0;
};

namespace detail {

inline std::vector<int> joints_by_names(const Motion& m, const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const auto& name : names) {
        bool found = false;
        for (int j = 0; j < m.joint_count(); ++j)
            if (m.topology.joint_names[size_t(j)] == name) {
                out.push_back(j);
                found = true;
                break;
            }
        if (!found) return {};
    }
    return out;
}

inline std::vector<int> default_arm_joints(const Motion& m) {
    const std::vector<int> named = joints_by_names(m, {"Racket hand", "Racket top"});
    if (!named.empty()) return named;
    std::vector<int> all(size_t(m.joint_count()));
    for (int j = 0; j < m.joint_count(); ++j) all[size_t(j)] = j;
    return all;
}

inline std::vector<int> default_method_joints(const Motion& m, Method method) {
    if (method == Method::gram) {
        const std::vector<int> named =
            joints_by_names(m, {"Ankle left", "Ankle right", "Hip left", "Hip right", "Knee left",
                                "Knee right", "Spine low", "Spine high", "Racket hand",
                                "Racket top"});
        if (!named.empty()) return named;
        std::vector<int> all(size_t(m.joint_count()));
        for (int j = 0; j < m.joint_count(); ++j) all[size_t(j)] = j;
        return all;
    }
    return default_arm_joints(m);
}

/// Body center: midpoint of the spine when named, centroid otherwise.
inline std::vector<Eigen::Vector3d> body_center_track(const Motion& m) {
    const std::vector<int> spine = joints_by_names(m, {"Spine low", "Spine high"});
    std::vector<Eigen::Vector3d> out(m.frames.size());
    for (std::size_t f = 0; f < m.frames.size(); ++f) {
        if (!spine.empty()) {
            out[f] = 0.5 * (m.frames[f][size_t(spine[0])] + m.frames[f][size_t(spine[1])]);
        } else {
            Eigen::Vector3d acc = Eigen::Vector3d::Zero();
            for (const auto& joint : m.frames[f]) acc += joint;
            out[f] = acc / double(m.frames[f].size());
        }
    }
    return out;
}

inline std::vector<double> midpoint_times(const std::vector<double>& times) {
    std::vector<double> out(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) out[i] = 0.5 * (times[i] + times[i + 1]);
    return out;
}

inline int nearest_index(const std::vector<double>& sorted, double t) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    if (it == sorted.begin()) return 0;
    if (it == sorted.end()) return static_cast<int>(sorted.size()) - 1;
    const auto hi = static_cast<int>(it - sorted.begin());
    return (t - sorted[size_t(hi - 1)] <= sorted[size_t(hi)] - t) ? hi - 1 : hi;
}

struct JointProblem {
    CostOracle cost;
    std::vector<double> times_in;   // grid index -> normalized input time
    std::vector<double> times_ref;  // grid index -> normalized reference time
};

inline JointProblem build_problem(const Motion& m_in, const Motion& m_ref, Method method,
                                  int joint, const std::vector<Eigen::Vector3d>& center_in,
                                  const std::vector<Eigen::Vector3d>& center_ref,
                                  double lambda_tau) {
    JointProblem p;
    switch (method) {
        case Method::srvt_r3: {
            const SrvCurve a = srvt_r3(joint_trajectory(m_in, joint), m_in.times);
            const SrvCurve b = srvt_r3(joint_trajectory(m_ref, joint), m_ref.times);
            p.cost = srv_cost(a, b);
            p.times_in = a.times;
            p.times_ref = b.times;
            break;
        }
        case Method::frenet: {
            const FrenetData a = frenet_frames(joint_trajectory(m_in, joint), m_in.times);
            const FrenetData b = frenet_frames(joint_trajectory(m_ref, joint), m_ref.times);
            p.cost = frenet_cost(a, b, lambda_tau);
            p.times_in = a.times;
            p.times_ref = b.times;
            break;
        }
        case Method::sphere_srv: {
            const SphereCurve a =
                make_sphere_curve(joint_trajectory(m_in, joint), center_in, m_in.times);
            const SphereCurve b =
                make_sphere_curve(joint_trajectory(m_ref, joint), center_ref, m_ref.times);
            p.cost = sphere_srv_cost(a, b);
            p.times_in = midpoint_times(a.times);
            p.times_ref = midpoint_times(b.times);
            break;
        }
        default:
            throw std::logic_error("build_problem handles per-joint methods only");
    }
    return p;
}

/// Frame-level anchor pairs from arm keyframes, averaged over the selected
/// joints. Pairs colliding with the endpoints are dropped.
inline std::vector<std::array<int, 2>> keyframe_anchor_pairs(const Motion& m_in,
                                                             const Motion& m_ref,
                                                             const std::vector<int>& arm_joints,
                                                             int smooth_window) {
    long sum_in[3] = {0, 0, 0}, sum_ref[3] = {0, 0, 0};
    long used = 0;
    std::exception_ptr last_failure;
    for (int joint : arm_joints) {
        try {
            const Keyframes a = detect_keyframes(joint_z_signal(m_in, joint), smooth_window);
            const Keyframes b = detect_keyframes(joint_z_signal(m_ref, joint), smooth_window);
            sum_in[0] += a.high1;
            sum_in[1] += a.low;
            sum_in[2] += a.high2;
            sum_ref[0] += b.high1;
            sum_ref[1] += b.low;
            sum_ref[2] += b.high2;
            ++used;
        } catch (...) {
            last_failure = std::current_exception();
        }
    }
    if (used == 0) std::rethrow_exception(last_failure);
    std::vector<std::array<int, 2>> pairs;
    for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>(std::lround(double(sum_in[k]) / double(used)));
        const int j = static_cast<int>(std::lround(double(sum_ref[k]) / double(used)));
        if (i <= 0 || j <= 0 || i >= m_in.frame_count() - 1 || j >= m_ref.frame_count() - 1)
            continue;
        if (!pairs.empty() && (i <= pairs.back()[0] || j <= pairs.back()[1])) continue;
        pairs.push_back({i, j});
    }
    return pairs;
}

/// Maps frame-level anchors onto a feature grid through its time arrays.
inline std::vector<Anchor> map_anchors(const std::vector<std::array<int, 2>>& frame_pairs,
                                       const Motion& m_in, const Motion& m_ref,
                                       const JointProblem& p, int tolerance) {
    std::vector<Anchor> anchors;
    for (const auto& pair : frame_pairs) {
        Anchor a;
        a.i = nearest_index(p.times_in, double(pair[0]) / (m_in.frame_count() - 1));
        a.j = nearest_index(p.times_ref, double(pair[1]) / (m_ref.frame_count() - 1));
        a.tolerance_w = tolerance;
        const bool on_edge = (a.i <= 0 && a.j <= 0) ||
                             (a.i >= p.cost.rows - 1 && a.j >= p.cost.cols - 1);
        if (on_edge) continue;
        if (!anchors.empty() && (a.i <= anchors.back().i || a.j <= anchors.back().j))
            throw std::invalid_argument("infeasible anchor chain after grid mapping");
        anchors.push_back(a);
    }
    return anchors;
}

}  // namespace detail

/// Aligns m_in to m_ref. The returned warp psi maps reference time to input
/// time: m_in(psi(u)) tracks m_ref(u), i.e. apply_warp(m_in, psi) plays the
/// input at the reference's rate. path pairs (input frame, reference frame)
/// and warp stay consistent through path_from_warp.
///
/// Per-joint methods solve one grid per joint, concurrently, and combine the
/// per-joint warps; the Gram method solves a single global grid. With
/// keyframe anchoring the grids run through anchored_dtw; an infeasible
/// anchor chain falls back to the plain solver and sets fallback_unanchored.
inline AlignmentResult align_motions(const Motion& m_in, const Motion& m_ref,
                                     const AlignOptions& opt) {
    const auto started = std::chrono::steady_clock::now();
    if (m_in.topology.joint_names != m_ref.topology.joint_names)
        throw std::invalid_argument("motions must share a skeleton topology");

    if (opt.method == Method::keyframes) {
        const std::vector<int> arm =
            opt.joints.empty() ? detail::default_arm_joints(m_in) : opt.joints;
        const Diffeomorphism forward =
            coarse_align(m_in, m_ref, arm, opt.anchoring.smooth_window);
        AlignmentResult result;
        result.warp = invert(forward);
        result.path = path_from_warp(forward, m_in.frame_count(), m_ref.frame_count());
        result.wall_time_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
        return result;
    }

    const std::vector<int> joints =
        opt.joints.empty() ? detail::default_method_joints(m_in, opt.method) : opt.joints;
    if (joints.empty()) throw std::invalid_argument("no joints selected");
    for (int j : joints)
        if (j < 0 || j >= m_in.joint_count())
            throw std::invalid_argument("selected joint out of range");

    std::vector<Eigen::Vector3d> center_in, center_ref;
    if (opt.method == Method::sphere_srv) {
        center_in = detail::body_center_track(m_in);
        center_ref = detail::body_center_track(m_ref);
    }

    // frame-level anchors are shared across joints
    std::vector<std::array<int, 2>> frame_anchors;
    if (opt.anchoring.kind == AnchoringSpec::Kind::keyframes)
        frame_anchors = detail::keyframe_anchor_pairs(m_in, m_ref, detail::default_arm_joints(m_in),
                                                      opt.anchoring.smooth_window);

    struct JointOutcome {
        Diffeomorphism forward;  // input time -> reference time
        double total_cost = 0.0;
        std::int64_t cells_visited = 0;
        bool fallback = false;
    };

    const bool global = (opt.method == Method::gram);
    const int n_problems = global ? 1 : static_cast<int>(joints.size());
    std::vector<JointOutcome> outcomes(static_cast<std::size_t>(n_problems));

    detail::parallel_for(n_problems, [&](int idx) {
        detail::JointProblem problem;
        if (global) {
            const GramSequence a = gram_sequence(m_in, joints);
            const GramSequence b = gram_sequence(m_ref, joints);
            problem.cost = gram_cost(a, b);
            problem.times_in = a.times;
            problem.times_ref = b.times;
        } else {
            problem = detail::build_problem(m_in, m_ref, opt.method, joints[size_t(idx)],
                                            center_in, center_ref, opt.lambda_tau);
        }

        AlignmentResult solved;
        bool fallback = false;
        if (opt.anchoring.kind == AnchoringSpec::Kind::keyframes) {
            try {
                const std::vector<Anchor> anchors =
                    detail::map_anchors(frame_anchors, m_in, m_ref, problem,
                                        opt.anchoring.tolerance_frames);
                solved = anchored_dtw(problem.cost, problem.cost.rows, problem.cost.cols, anchors);
            } catch (const std::invalid_argument&) {
                fallback = true;
                solved = dtw(problem.cost, problem.cost.rows, problem.cost.cols);
            }
        } else {
            solved = dtw(problem.cost, problem.cost.rows, problem.cost.cols);
        }

        std::vector<double> xs, ys;
        xs.reserve(solved.path.pairs.size());
        ys.reserve(solved.path.pairs.size());
        for (const auto& cell : solved.path.pairs) {
            xs.push_back(problem.times_in[size_t(cell[0])]);
            ys.push_back(problem.times_ref[size_t(cell[1])]);
        }
        JointOutcome outcome;
        outcome.forward = regularized_warp_through(std::move(xs), std::move(ys));
        outcome.total_cost = solved.total_cost;
        outcome.cells_visited = solved.cells_visited;
        outcome.fallback = fallback;
        outcomes[size_t(idx)] = std::move(outcome);
    });

    std::vector<Diffeomorphism> warps;
    warps.reserve(outcomes.size());
    AlignmentResult result;
    for (const auto& outcome : outcomes) {
        warps.push_back(outcome.forward);
        result.total_cost += outcome.total_cost;
        result.cells_visited += outcome.cells_visited;
        result.fallback_unanchored = result.fallback_unanchored || outcome.fallback;
    }
    std::vector<double> weights = global ? std::vector<double>{1.0} : opt.joint_weights;
    if (weights.empty()) weights.assign(warps.size(), 1.0 / double(warps.size()));
    if (weights.size() != warps.size())
        throw std::invalid_argument("one weight per aligned joint required");
    const Diffeomorphism forward = combine_warps(warps, weights, opt.combine);

    result.warp = invert(forward);
    result.path = path_from_warp(forward, m_in.frame_count(), m_ref.frame_count());
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return result;
}

}  // namespace motionsync
