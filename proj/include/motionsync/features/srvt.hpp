#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "motionsync/cost_oracle.hpp"

namespace motionsync {

/// Square-root velocity representation q = v/sqrt(|v|) of a space curve,
/// living on the midpoint grid of the input samples. q is zero exactly where
/// the velocity vanishes.
struct SrvCurve {
    std::vector<Eigen::Vector3d> q;
    std::vector<double> times;  // midpoint grid
};

inline SrvCurve srvt_r3(const std::vector<Eigen::Vector3d>& positions,
                        const std::vector<double>& times, double eps_v = kEpsVelocity) {
    if (positions.size() < 2 || positions.size() != times.size())
        throw std::invalid_argument("srvt_r3 needs >= 2 timestamped samples");
    SrvCurve out;
    out.q.reserve(positions.size() - 1);
    out.times.reserve(positions.size() - 1);
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        if (!(dt > 0.0)) throw std::invalid_argument("times must be strictly increasing");
        const Eigen::Vector3d v = (positions[i + 1] - positions[i]) / dt;
        const double speed = v.norm();
        out.q.push_back(speed < eps_v ? Eigen::Vector3d::Zero().eval()
                                      : (v / std::sqrt(speed)).eval());
        out.times.push_back(0.5 * (times[i] + times[i + 1]));
    }
    return out;
}

/// Local cost c(i,j) = |q_a(i) - q_b(j)|^2.
inline CostOracle srv_cost(const SrvCurve& a, const SrvCurve& b) {
    CostOracle oracle;
    oracle.rows = static_cast<int>(a.q.size());
    oracle.cols = static_cast<int>(b.q.size());
    oracle.fn = [qa = a.q, qb = b.q](int i, int j) {
        return (qa[size_t(i)] - qb[size_t(j)]).squaredNorm();
    };
    return oracle;
}

}  // namespace motionsync
