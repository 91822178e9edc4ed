#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "motionsync/warp.hpp"

namespace motionsync {

inline constexpr double kDefaultBoneTolerance = 0.05;  // 5% relative

struct SkeletonTopology {
    std::vector<std::string> joint_names;
    std::vector<std::array<int, 2>> links;  // unordered joint index pairs
    std::vector<double> bone_lengths;       // per link, meters; empty = take from frame 0

    int joint_index(const std::string& name) const {
        for (std::size_t j = 0; j < joint_names.size(); ++j)
            if (joint_names[j] == name) return static_cast<int>(j);
        throw std::invalid_argument("unknown joint: '" + name + "'");
    }
};

inline void validate_topology(const SkeletonTopology& topo) {
    const int n = static_cast<int>(topo.joint_names.size());
    for (const auto& link : topo.links) {
        if (link[0] < 0 || link[0] >= n || link[1] < 0 || link[1] >= n)
            throw std::invalid_argument("link references an unknown joint");
        if (link[0] == link[1]) throw std::invalid_argument("self-links are not allowed");
    }
    if (!topo.bone_lengths.empty()) {
        if (topo.bone_lengths.size() != topo.links.size())
            throw std::invalid_argument("one bone length per link required");
        for (double c : topo.bone_lengths)
            if (!(c > 0.0)) throw std::invalid_argument("bone lengths must be positive");
    }
}

/// Time-stamped skeleton poses on normalized time. times is strictly
/// increasing with times[0] = 0 and times[K-1] = 1; frames holds K poses of
/// N joints each. The vertical axis is the z coordinate.
struct Motion {
    SkeletonTopology topology;
    std::vector<double> times;
    std::vector<std::vector<Eigen::Vector3d>> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    int joint_count() const { return static_cast<int>(topology.joint_names.size()); }
};

/// Affine map of arbitrary strictly increasing timestamps onto [0,1].
inline std::vector<double> normalize_times(const std::vector<double>& raw) {
    if (raw.size() < 2) throw std::invalid_argument("a motion needs at least 2 frames");
    for (std::size_t k = 1; k < raw.size(); ++k)
        if (!(raw[k] > raw[k - 1]))
            throw std::invalid_argument("timestamps must be strictly increasing");
    const double t0 = raw.front(), span = raw.back() - raw.front();
    std::vector<double> out(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) out[k] = (raw[k] - t0) / span;
    out.front() = 0.0;
    out.back() = 1.0;
    return out;
}

inline Motion make_motion(SkeletonTopology topology, const std::vector<double>& raw_times,
                          std::vector<std::vector<Eigen::Vector3d>> frames) {
    validate_topology(topology);
    if (frames.size() != raw_times.size())
        throw std::invalid_argument("one pose per timestamp required");
    const std::size_t n = topology.joint_names.size();
    for (const auto& pose : frames)
        if (pose.size() != n)
            throw std::invalid_argument("inconsistent joint count across frames");
    Motion m;
    m.topology = std::move(topology);
    m.times = normalize_times(raw_times);
    m.frames = std::move(frames);
    return m;
}

struct ValidationReport {
    double max_relative_bone_deviation = 0.0;
    std::vector<std::pair<int, int>> offending_frames;  // (frame index, link index)
    bool passed = true;
};

/// Checks bone-length constancy over all frames and links. Reference lengths
/// come from the topology, or from frame 0 when it omits them.
inline ValidationReport validate_skeleton(const Motion& m, double bone_tolerance = kDefaultBoneTolerance) {
    if (m.topology.links.empty())
        throw std::invalid_argument("validate_skeleton needs a topology with links");
    std::vector<double> lengths = m.topology.bone_lengths;
    if (lengths.empty()) {
        lengths.reserve(m.topology.links.size());
        for (const auto& link : m.topology.links) {
            const double c = (m.frames[0][size_t(link[0])] - m.frames[0][size_t(link[1])]).norm();
            if (!(c > 0.0))
                throw std::invalid_argument("frame 0 has coincident linked joints");
            lengths.push_back(c);
        }
    }
    ValidationReport report;
    for (int f = 0; f < m.frame_count(); ++f) {
        for (std::size_t l = 0; l < m.topology.links.size(); ++l) {
            const auto& link = m.topology.links[l];
            const double d = (m.frames[size_t(f)][size_t(link[0])] -
                              m.frames[size_t(f)][size_t(link[1])]).norm();
            const double rel = std::abs(d - lengths[l]) / lengths[l];
            if (rel > bone_tolerance) report.offending_frames.emplace_back(f, static_cast<int>(l));
            report.max_relative_bone_deviation = std::max(report.max_relative_bone_deviation, rel);
        }
    }
    report.passed = report.max_relative_bone_deviation <= bone_tolerance;
    return report;
}

/// Pose at normalized time t by per-joint linear interpolation; exact at the
/// sample times.
inline std::vector<Eigen::Vector3d> sample_pose(const Motion& m, double t) {
    const auto& times = m.times;
    if (t <= times.front()) return m.frames.front();
    if (t >= times.back()) return m.frames.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const auto lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    if (w == 0.0) return m.frames[lo];
    std::vector<Eigen::Vector3d> pose(m.frames[lo].size());
    for (std::size_t j = 0; j < pose.size(); ++j)
        pose[j] = (1.0 - w) * m.frames[lo][j] + w * m.frames[hi][j];
    return pose;
}

/// Per-joint trajectory of one joint over all frames.
inline std::vector<Eigen::Vector3d> joint_trajectory(const Motion& m, int joint) {
    if (joint < 0 || joint >= m.joint_count()) throw std::invalid_argument("joint out of range");
    std::vector<Eigen::Vector3d> out(m.frames.size());
    for (std::size_t f = 0; f < m.frames.size(); ++f) out[f] = m.frames[f][size_t(joint)];
    return out;
}

inline std::vector<double> joint_z_signal(const Motion& m, int joint) {
    if (joint < 0 || joint >= m.joint_count()) throw std::invalid_argument("joint out of range");
    std::vector<double> z(m.frames.size());
    for (std::size_t f = 0; f < m.frames.size(); ++f) z[f] = m.frames[f][size_t(joint)].z();
    return z;
}

inline Motion resample(const Motion& m, const std::vector<double>& query_times) {
    if (query_times.size() < 2)
        throw std::invalid_argument("resample needs at least 2 query times");
    for (double t : query_times)
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("query times must lie in [0,1]");
    std::vector<std::vector<Eigen::Vector3d>> frames;
    frames.reserve(query_times.size());
    for (double t : query_times) frames.push_back(sample_pose(m, t));
    return make_motion(m.topology, query_times, std::move(frames));
}

/// New motion on a uniform grid of out_frames samples whose pose at time u
/// is m(phi(u)): the same action at a different rate.
inline Motion apply_warp(const Motion& m, const Diffeomorphism& phi, int out_frames) {
    if (out_frames < 2) throw std::invalid_argument("apply_warp needs at least 2 output frames");
    std::vector<double> times(static_cast<std::size_t>(out_frames));
    std::vector<std::vector<Eigen::Vector3d>> frames;
    frames.reserve(times.size());
    for (int i = 0; i < out_frames; ++i) {
        const double u = static_cast<double>(i) / (out_frames - 1);
        times[size_t(i)] = u;
        frames.push_back(sample_pose(m, phi(u)));
    }
    Motion out;
    out.topology = m.topology;
    out.times = std::move(times);
    out.frames = std::move(frames);
    return out;
}

}  // namespace motionsync
