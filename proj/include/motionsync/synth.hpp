#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>

#include "motionsync/detail/rng.hpp"
#include "motionsync/motion.hpp"

namespace motionsync {

// Deterministic stand-in for recorded racket-sport data: a 10-joint skeleton
// performing one arm swing whose elevation runs high - low - high, with all
// extrema strictly inside the clip.

/// Amplitudes and phase offsets of the synthetic swing. Zeroing every
/// amplitude yields a constant motion.
struct SwingProfile {
    double elevation_amp = 0.9;   // radians of arm elevation swing
    double azimuth_amp = 0.8;     // radians of arm azimuth sweep
    double azimuth_phase = 0.9;
    double twist_amp = 0.25;      // torso twist, radians
    double twist_phase = 2.0;
    double leg_amp = 0.35;        // leg swing, radians
    double leg_phase = 4.0;
    double sway_amp = 0.05;       // pelvis sway, meters
    double sway_phase = 1.3;
};

struct SyntheticSpec {
    int frame_count = 100;
    SwingProfile profile;
    double noise_scale = 0.0;  // meters, uniform per coordinate
    std::uint64_t seed = 0;
};

namespace detail {

// One high-low-high cycle with interior extrema near t = 0.22, 0.55, 0.85.
inline double swing_elevation_shape(double t) {
    const auto bump = [](double x, double c, double w) {
        const double u = (x - c) / w;
        return std::exp(-u * u);
    };
    return bump(t, 0.22, 0.12) - bump(t, 0.55, 0.14) + 0.8 * bump(t, 0.85, 0.12);
}

inline Eigen::Vector3d rot_z(double angle, const Eigen::Vector3d& v) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

}  // namespace detail

inline SkeletonTopology synthetic_topology() {
    SkeletonTopology topo;
    topo.joint_names = {"Spine low",  "Spine high", "Hip left",   "Hip right",
                        "Knee left",  "Knee right", "Ankle left", "Ankle right",
                        "Racket hand", "Racket top"};
    topo.links = {{0, 1}, {0, 2}, {0, 3}, {2, 4}, {3, 5}, {4, 6}, {5, 7}, {1, 8}, {8, 9}};
    topo.bone_lengths = {0.45, 0.17, 0.17, 0.42, 0.42, 0.40, 0.40, 0.55, 0.35};
    return topo;
}

/// Deterministic per seed. With noise_scale = 0 every bone length is exact
/// because all segments are produced by rigid offsets and unit directions.
inline Motion synth_motion(const SyntheticSpec& spec) {
    if (spec.frame_count < 2) throw std::invalid_argument("frame_count must be >= 2");
    const SwingProfile& p = spec.profile;
    constexpr double tau = 2.0 * std::numbers::pi;
    constexpr double spine_len = 0.45, hip_w = 0.17, thigh_len = 0.42, shank_len = 0.40;
    constexpr double arm_len = 0.55, racket_len = 0.35;

    std::mt19937_64 noise_gen(spec.seed);
    const auto K = static_cast<std::size_t>(spec.frame_count);
    std::vector<double> times(K);
    std::vector<std::vector<Eigen::Vector3d>> frames(K, std::vector<Eigen::Vector3d>(10));

    for (std::size_t f = 0; f < K; ++f) {
        const double t = static_cast<double>(f) / (spec.frame_count - 1);
        times[f] = t;

        const double twist = p.twist_amp * std::sin(tau * t + p.twist_phase);
        const double tilt = 0.35 * p.twist_amp * std::sin(tau * t + p.twist_phase + 1.1);
        const Eigen::Vector3d pelvis(p.sway_amp * std::sin(tau * t + p.sway_phase),
                                     0.6 * p.sway_amp * std::sin(2.0 * tau * t + 0.7 * p.sway_phase),
                                     0.95);

        const Eigen::Vector3d spine_low = pelvis;
        const Eigen::Vector3d spine_high =
            spine_low + spine_len * detail::rot_z(twist, {std::sin(tilt), 0.0, std::cos(tilt)});
        const Eigen::Vector3d hip_l = pelvis + detail::rot_z(twist, {0.0, hip_w, 0.0});
        const Eigen::Vector3d hip_r = pelvis + detail::rot_z(twist, {0.0, -hip_w, 0.0});

        const double leg_l = p.leg_amp * std::sin(tau * t + p.leg_phase);
        const double leg_r = p.leg_amp * std::sin(tau * t + p.leg_phase + std::numbers::pi);
        const double shin_l = 0.8 * p.leg_amp * std::sin(tau * t + p.leg_phase + 0.9);
        const double shin_r = 0.8 * p.leg_amp * std::sin(tau * t + p.leg_phase + 0.9 + std::numbers::pi);
        const Eigen::Vector3d knee_l =
            hip_l + thigh_len * detail::rot_z(twist, {std::sin(leg_l), 0.0, -std::cos(leg_l)});
        const Eigen::Vector3d knee_r =
            hip_r + thigh_len * detail::rot_z(twist, {std::sin(leg_r), 0.0, -std::cos(leg_r)});
        const Eigen::Vector3d ankle_l =
            knee_l + shank_len * detail::rot_z(twist, {std::sin(shin_l), 0.0, -std::cos(shin_l)});
        const Eigen::Vector3d ankle_r =
            knee_r + shank_len * detail::rot_z(twist, {std::sin(shin_r), 0.0, -std::cos(shin_r)});

        // arm: elevation follows the high-low-high shape, azimuth keeps the
        // hand moving when the elevation rate crosses zero
        const double elevation = 1.30 - p.elevation_amp * detail::swing_elevation_shape(t);
        const double azimuth = 0.45 + p.azimuth_amp * std::sin(tau * t + p.azimuth_phase) + 0.5 * twist;
        const Eigen::Vector3d arm_dir(std::sin(elevation) * std::cos(azimuth),
                                      std::sin(elevation) * std::sin(azimuth),
                                      std::cos(elevation));
        const Eigen::Vector3d hand = spine_high + arm_len * arm_dir;
        const double re = elevation + 0.25, ra = azimuth + 0.30;
        const Eigen::Vector3d racket_dir(std::sin(re) * std::cos(ra), std::sin(re) * std::sin(ra),
                                         std::cos(re));
        const Eigen::Vector3d racket_top = hand + racket_len * racket_dir;

        frames[f] = {spine_low, spine_high, hip_l, hip_r, knee_l,
                     knee_r,    ankle_l,    ankle_r, hand, racket_top};
        if (spec.noise_scale > 0.0) {
            for (auto& joint : frames[f])
                joint += spec.noise_scale * Eigen::Vector3d(detail::uniform_in(noise_gen, -1.0, 1.0),
                                                            detail::uniform_in(noise_gen, -1.0, 1.0),
                                                            detail::uniform_in(noise_gen, -1.0, 1.0));
        }
    }

    Motion m;
    m.topology = synthetic_topology();
    m.times = std::move(times);
    m.frames = std::move(frames);
    return m;
}

}  // namespace motionsync
