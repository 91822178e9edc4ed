#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "motionsync/cost_oracle.hpp"
#include "motionsync/motion.hpp"

namespace motionsync {

/// Unit-vector curve joining a joint to the body center.
struct SphereCurve {
    std::vector<Eigen::Vector3d> u;
    std::vector<double> times;
};

/// Log map on S^2: tangent vector at p whose exponential reaches q.
/// Throws near the antipode, where the map is singular.
inline Eigen::Vector3d sphere_log(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    const double dot = std::clamp(p.dot(q), -1.0, 1.0);
    if (dot < -1.0 + 1e-9)
        throw std::invalid_argument("log map undefined for antipodal points");
    const Eigen::Vector3d w = q - dot * p;
    const double w_norm = w.norm();
    if (w_norm < 1e-12) return w;
    return w * (std::atan2(w_norm, dot) / w_norm);
}

/// Parallel transport of a tangent vector at `from` to `to` along the
/// connecting great circle.
inline Eigen::Vector3d sphere_parallel_transport(const Eigen::Vector3d& from,
                                                 const Eigen::Vector3d& to,
                                                 const Eigen::Vector3d& v) {
    const Eigen::Vector3d e = sphere_log(from, to);
    const double theta = e.norm();
    if (theta < 1e-12) return v;
    const Eigen::Vector3d dir = e / theta;
    const double along = v.dot(dir);
    return v + (std::cos(theta) - 1.0) * along * dir - std::sin(theta) * along * from;
}

inline SphereCurve make_sphere_curve(const std::vector<Eigen::Vector3d>& joint_positions,
                                     const std::vector<Eigen::Vector3d>& center_positions,
                                     const std::vector<double>& times,
                                     double eps_v = kEpsVelocity) {
    if (joint_positions.size() != center_positions.size() || joint_positions.size() != times.size())
        throw std::invalid_argument("sphere curve inputs must have matching lengths");
    SphereCurve out;
    out.u.reserve(joint_positions.size());
    out.times = times;
    for (std::size_t f = 0; f < joint_positions.size(); ++f) {
        const Eigen::Vector3d d = joint_positions[f] - center_positions[f];
        const double n = d.norm();
        if (n < eps_v)
            throw std::invalid_argument("joint coincides with the center in some frame");
        out.u.push_back(d / n);
    }
    return out;
}

inline SphereCurve sphere_curve(const Motion& m, int joint, int center) {
    if (joint == center) throw std::invalid_argument("joint and center must differ");
    return make_sphere_curve(joint_trajectory(m, joint), joint_trajectory(m, center), m.times);
}

/// Square-root-velocity cost for spherical curves: per-step tangents are
/// log-map velocities, square-root scaled, then parallel-transported to one
/// fixed reference point (the first sample of curve a) so vectors from both
/// curves live in a common tangent plane.
inline CostOracle sphere_srv_cost(const SphereCurve& a, const SphereCurve& b,
                                  double eps_v = kEpsVelocity) {
    if (a.u.size() < 2 || b.u.size() < 2)
        throw std::invalid_argument("sphere curves need at least 2 samples");
    const Eigen::Vector3d reference = a.u.front();
    const auto transported_srv = [&](const SphereCurve& curve) {
        std::vector<Eigen::Vector3d> q;
        q.reserve(curve.u.size() - 1);
        for (std::size_t i = 0; i + 1 < curve.u.size(); ++i) {
            const double dt = curve.times[i + 1] - curve.times[i];
            if (!(dt > 0.0)) throw std::invalid_argument("times must be strictly increasing");
            const Eigen::Vector3d w = sphere_log(curve.u[i], curve.u[i + 1]) / dt;
            const double speed = w.norm();
            if (speed < eps_v) {
                q.push_back(Eigen::Vector3d::Zero());
            } else {
                q.push_back(sphere_parallel_transport(curve.u[i], reference,
                                                      w / std::sqrt(speed)));
            }
        }
        return q;
    };
    CostOracle oracle;
    oracle.rows = static_cast<int>(a.u.size()) - 1;
    oracle.cols = static_cast<int>(b.u.size()) - 1;
    oracle.fn = [qa = transported_srv(a), qb = transported_srv(b)](int i, int j) {
        return (qa[size_t(i)] - qb[size_t(j)]).squaredNorm();
    };
    return oracle;
}

}  // namespace motionsync
