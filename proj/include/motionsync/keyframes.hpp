#pragma once

#include <stdexcept>
#include <vector>

#include "motionsync/motion.hpp"
#include "motionsync/warp.hpp"

namespace motionsync {

/// Ordered elevation keyframes of one joint: first peak, trough, second peak.
struct Keyframes {
    int high1 = 0;
    int low = 0;
    int high2 = 0;
};

namespace detail {

inline std::vector<double> moving_average(const std::vector<double>& z, int window) {
    if (window <= 1) return z;
    const int K = static_cast<int>(z.size());
    const int half = window / 2;
    std::vector<double> out(z.size());
    for (int i = 0; i < K; ++i) {
        const int lo = std::max(0, i - half), hi = std::min(K - 1, i + half);
        double acc = 0.0;
        for (int k = lo; k <= hi; ++k) acc += z[size_t(k)];
        out[size_t(i)] = acc / (hi - lo + 1);
    }
    return out;
}

/// First index of the extreme value in [lo, hi]; earliest wins ties.
template <typename Cmp>
int first_extremum(const std::vector<double>& z, int lo, int hi, Cmp better) {
    int best = lo;
    for (int i = lo + 1; i <= hi; ++i)
        if (better(z[size_t(i)], z[size_t(best)])) best = i;
    return best;
}

}  // namespace detail

/// Scans for the first peak, the trough after it, and the peak after that.
/// Each search range is truncated so the later keyframes always have room,
/// which keeps high1 < low < high2. Ties resolve to the earliest frame.
inline Keyframes detect_keyframes(const std::vector<double>& z, int smooth_window = 1) {
    const int K = static_cast<int>(z.size());
    if (K < 3) throw std::invalid_argument("keyframe detection needs at least 3 frames");
    const std::vector<double> s = detail::moving_average(z, smooth_window);
    bool constant = true;
    for (double v : s)
        if (v != s[0]) {
            constant = false;
            break;
        }
    if (constant) throw std::invalid_argument("keyframe detection needs a non-constant signal");
    const auto greater = [](double a, double b) { return a > b; };
    const auto less = [](double a, double b) { return a < b; };
    Keyframes kf;
    kf.high1 = detail::first_extremum(s, 0, K - 3, greater);
    kf.low = detail::first_extremum(s, kf.high1 + 1, K - 2, less);
    kf.high2 = detail::first_extremum(s, kf.low + 1, K - 1, greater);
    return kf;
}

/// Piecewise-linear warp through (0,0), the three keyframe pairs and (1,1)
/// in normalized coordinates. Anchor pairs that collide with an earlier
/// anchor or an endpoint are dropped to keep the graph strictly monotone.
inline Diffeomorphism keyframe_warp(const Keyframes& k1, const Keyframes& k2, int frames1,
                                    int frames2) {
    if (frames1 < 2 || frames2 < 2) throw std::invalid_argument("need at least 2 frames");
    const auto in_range = [](const Keyframes& k, int K) {
        return 0 <= k.high1 && k.high1 < k.low && k.low < k.high2 && k.high2 < K;
    };
    if (!in_range(k1, frames1) || !in_range(k2, frames2))
        throw std::invalid_argument("keyframes out of range or unordered");
    std::vector<double> xs{0.0}, ys{0.0};
    const int a1[3] = {k1.high1, k1.low, k1.high2};
    const int a2[3] = {k2.high1, k2.low, k2.high2};
    for (int k = 0; k < 3; ++k) {
        const double x = static_cast<double>(a1[k]) / (frames1 - 1);
        const double y = static_cast<double>(a2[k]) / (frames2 - 1);
        if (x > xs.back() && y > ys.back() && x < 1.0 && y < 1.0) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    xs.push_back(1.0);
    ys.push_back(1.0);
    return Diffeomorphism(std::move(xs), std::move(ys));
}

/// Correspondence induced by the keyframe warp: the temporal bounding box of
/// the movement, mapped keyframe to keyframe and linear in between.
inline FrameCorrespondence keyframe_correspondence(const Keyframes& k1, const Keyframes& k2,
                                                   int frames1, int frames2) {
    return path_from_warp(keyframe_warp(k1, k2, frames1, frames2), frames1, frames2);
}

/// Coarse alignment from arm elevation: one keyframe warp per selected joint,
/// combined by uniform mean. Maps m1's time axis to m2's. Joints whose
/// detection fails are skipped; if all fail the last failure propagates.
inline Diffeomorphism coarse_align(const Motion& m1, const Motion& m2,
                                   const std::vector<int>& arm_joints, int smooth_window = 1) {
    if (arm_joints.empty()) throw std::invalid_argument("coarse_align needs at least one joint");
    std::vector<Diffeomorphism> warps;
    std::exception_ptr last_failure;
    for (int joint : arm_joints) {
        try {
            const Keyframes k1 = detect_keyframes(joint_z_signal(m1, joint), smooth_window);
            const Keyframes k2 = detect_keyframes(joint_z_signal(m2, joint), smooth_window);
            warps.push_back(keyframe_warp(k1, k2, m1.frame_count(), m2.frame_count()));
        } catch (...) {
            last_failure = std::current_exception();
        }
    }
    if (warps.empty()) std::rethrow_exception(last_failure);
    const std::vector<double> weights(warps.size(), 1.0 / static_cast<double>(warps.size()));
    return combine_warps(warps, weights, CombineMethod::weighted_mean);
}

}  // namespace motionsync
