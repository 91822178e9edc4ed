#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "motionsync/cost_oracle.hpp"

namespace motionsync {

/// Moving frame of a joint trajectory after resampling to uniform arclength
/// (the canonical, rate-independent parameterization). Curvature and torsion
/// are the velocity of the resulting curve in the rotation group; torsion is
/// undefined where the curve is locally straight.
struct FrenetData {
    std::vector<Eigen::Matrix3d> frames;  // columns: tangent, normal, binormal
    std::vector<double> curvature;        // 1/m, >= 0
    std::vector<double> torsion;          // 1/m, zero where undefined
    std::vector<std::uint8_t> torsion_defined;
    std::vector<double> arclength;        // uniform grid, m
    std::vector<double> times;            // original time of each sample
};

inline FrenetData frenet_frames(const std::vector<Eigen::Vector3d>& positions,
                                const std::vector<double>& times, int samples = 0,
                                double eps_v = kEpsVelocity) {
    const auto K = positions.size();
    if (K < 4 || times.size() != K)
        throw std::invalid_argument("frenet_frames needs >= 4 timestamped samples");
    std::vector<double> s(K, 0.0);
    for (std::size_t k = 1; k < K; ++k)
        s[k] = s[k - 1] + (positions[k] - positions[k - 1]).norm();
    const double length = s.back();
    if (length < eps_v)
        throw std::invalid_argument("stationary trajectory cannot be arclength-parameterized");

    const int R = samples > 0 ? samples : static_cast<int>(K);
    if (R < 4) throw std::invalid_argument("need at least 4 resampled points");
    const double h = length / (R - 1);

    const auto R_sz = static_cast<std::size_t>(R);
    FrenetData out;
    out.arclength.resize(R_sz);
    out.times.resize(R_sz);
    std::vector<Eigen::Vector3d> c(R_sz);
    std::size_t seg = 0;
    for (int r = 0; r < R; ++r) {
        const double target = (r == R - 1) ? length : h * r;
        while (seg + 2 < K && (s[seg + 1] < target || s[seg + 1] == s[seg])) ++seg;
        const double span = s[seg + 1] - s[seg];
        const double w = span > 0.0 ? std::clamp((target - s[seg]) / span, 0.0, 1.0) : 0.0;
        c[size_t(r)] = (1.0 - w) * positions[seg] + w * positions[seg + 1];
        out.times[size_t(r)] = (1.0 - w) * times[seg] + w * times[seg + 1];
        out.arclength[size_t(r)] = target;
    }

    // central differences on the uniform arclength grid; boundaries replicate
    // the nearest interior estimate
    std::vector<Eigen::Vector3d> d1(R_sz), d2(R_sz), d3(R_sz);
    for (int r = 1; r < R - 1; ++r) {
        d1[size_t(r)] = (c[size_t(r + 1)] - c[size_t(r - 1)]) / (2.0 * h);
        d2[size_t(r)] = (c[size_t(r + 1)] - 2.0 * c[size_t(r)] + c[size_t(r - 1)]) / (h * h);
    }
    d1[0] = d1[1];
    d1[size_t(R - 1)] = d1[size_t(R - 2)];
    d2[0] = d2[1];
    d2[size_t(R - 1)] = d2[size_t(R - 2)];
    for (int r = 2; r < R - 2; ++r)
        d3[size_t(r)] = (c[size_t(r + 2)] - 2.0 * c[size_t(r + 1)] + 2.0 * c[size_t(r - 1)] -
                         c[size_t(r - 2)]) /
                        (2.0 * h * h * h);
    d3[1] = d3[2];
    d3[0] = d3[2];
    d3[size_t(R - 2)] = d3[size_t(R - 3)];
    d3[size_t(R - 1)] = d3[size_t(R - 3)];

    out.curvature.resize(R_sz);
    out.torsion.assign(R_sz, 0.0);
    out.torsion_defined.assign(R_sz, 0);
    out.frames.resize(R_sz);
    Eigen::Matrix3d last_frame = Eigen::Matrix3d::Identity();
    bool have_frame = false;
    for (int r = 0; r < R; ++r) {
        const Eigen::Vector3d v = d1[size_t(r)];
        const double speed = v.norm();
        if (speed < eps_v) {
            // degenerate segment: keep the last valid frame
            out.curvature[size_t(r)] = 0.0;
            out.frames[size_t(r)] = last_frame;
            continue;
        }
        const Eigen::Vector3d cross = v.cross(d2[size_t(r)]);
        const double cross_norm = cross.norm();
        out.curvature[size_t(r)] = cross_norm / (speed * speed * speed);
        if (cross_norm >= eps_v) {
            out.torsion[size_t(r)] =
                v.cross(d2[size_t(r)]).dot(d3[size_t(r)]) / (cross_norm * cross_norm);
            out.torsion_defined[size_t(r)] = 1;
        }
        const Eigen::Vector3d tangent = v / speed;
        Eigen::Vector3d normal = d2[size_t(r)] - d2[size_t(r)].dot(tangent) * tangent;
        if (normal.norm() >= eps_v) {
            normal.normalize();
        } else if (have_frame) {
            const Eigen::Vector3d prev_normal = last_frame.col(1);
            normal = prev_normal - prev_normal.dot(tangent) * tangent;
            if (normal.norm() >= 1e-12) {
                normal.normalize();
            } else {
                normal = last_frame.col(2);
            }
        } else {
            // straight start: any unit vector orthogonal to the tangent
            const Eigen::Vector3d seedling =
                std::abs(tangent.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
            normal = (seedling - seedling.dot(tangent) * tangent).normalized();
        }
        Eigen::Matrix3d frame;
        frame.col(0) = tangent;
        frame.col(1) = normal;
        frame.col(2) = tangent.cross(normal);
        out.frames[size_t(r)] = frame;
        last_frame = frame;
        have_frame = true;
    }
    return out;
}

/// c(i,j) = (kappa1(i)-kappa2(j))^2 + lambda_tau*(tau1(i)-tau2(j))^2, with the
/// torsion term skipped when either side is undefined.
inline CostOracle frenet_cost(const FrenetData& a, const FrenetData& b, double lambda_tau = 1.0) {
    CostOracle oracle;
    oracle.rows = static_cast<int>(a.curvature.size());
    oracle.cols = static_cast<int>(b.curvature.size());
    oracle.fn = [ka = a.curvature, kb = b.curvature, ta = a.torsion, tb = b.torsion,
                 da = a.torsion_defined, db = b.torsion_defined, lambda_tau](int i, int j) {
        const double dk = ka[size_t(i)] - kb[size_t(j)];
        double cost = dk * dk;
        if (da[size_t(i)] && db[size_t(j)]) {
            const double dt = ta[size_t(i)] - tb[size_t(j)];
            cost += lambda_tau * dt * dt;
        }
        return cost;
    };
    return oracle;
}

}  // namespace motionsync
