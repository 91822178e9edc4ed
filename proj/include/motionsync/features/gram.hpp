#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "motionsync/cost_oracle.hpp"
#include "motionsync/motion.hpp"

namespace motionsync {

/// Per-frame Gram matrices G = J J^T of the centered active-joint positions.
/// Centering makes G invariant under global rotation and translation of the
/// pose. The centered n x 3 factors are kept for fast pairwise distances.
struct GramSequence {
    std::vector<Eigen::MatrixXd> gram;
    std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> centered;
    std::vector<double> times;
};

inline GramSequence gram_sequence(const Motion& m, const std::vector<int>& active_joints) {
    if (active_joints.size() < 2)
        throw std::invalid_argument("gram_sequence needs at least 2 active joints");
    for (int j : active_joints)
        if (j < 0 || j >= m.joint_count()) throw std::invalid_argument("active joint out of range");
    const auto n = static_cast<Eigen::Index>(active_joints.size());
    GramSequence out;
    out.gram.reserve(m.frames.size());
    out.centered.reserve(m.frames.size());
    out.times = m.times;
    for (const auto& pose : m.frames) {
        Eigen::Matrix<double, Eigen::Dynamic, 3> J(n, 3);
        for (Eigen::Index r = 0; r < n; ++r) J.row(r) = pose[size_t(active_joints[size_t(r)])];
        J.rowwise() -= J.colwise().mean();
        out.centered.push_back(J);
        out.gram.push_back(J * J.transpose());
    }
    return out;
}

namespace detail {

inline void check_psd_input(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols()) throw std::invalid_argument("matrix must be square");
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("matrix must be symmetric");
}

// Eigenvalues clamped at zero after checking the PSD tolerance. Values at
// round-off scale are zeroed outright: sqrt would otherwise blow 1e-16
// noise up to 1e-8 per rank-deficient direction.
inline Eigen::VectorXd psd_eigenvalues(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = solver.eigenvalues();
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -1e-6 * scale)
        throw std::invalid_argument("matrix is not positive semi-definite");
    const double floor = 1e-12 * scale;
    return ev.unaryExpr([floor](double v) { return v < floor ? 0.0 : v; });
}

}  // namespace detail

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& g) {
    detail::check_psd_input(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (solver.eigenvalues().minCoeff() < -1e-6 * scale)
        throw std::invalid_argument("matrix is not positive semi-definite");
    const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

/// Distance in the space of positive semi-definite matrices:
/// d^2 = tr(G1) + tr(G2) - 2 tr((G1^{1/2} G2 G1^{1/2})^{1/2}).
inline double psd_distance(const Eigen::MatrixXd& g1, const Eigen::MatrixXd& g2) {
    detail::check_psd_input(g1);
    detail::check_psd_input(g2);
    if (g1.rows() != g2.rows()) throw std::invalid_argument("matrix sizes must match");
    const Eigen::MatrixXd s1 = psd_sqrt(g1);
    const Eigen::VectorXd inner = detail::psd_eigenvalues(s1 * g2 * s1);
    const double d2 = g1.trace() + g2.trace() - 2.0 * inner.cwiseSqrt().sum();
    return std::sqrt(std::max(0.0, d2));
}

/// Squared psd_distance between frames, computed through the centered
/// factors: with G = J J^T the cross term reduces to the nuclear norm of
/// J1^T J2 (a 3x3 matrix), which keeps the grid sweep cheap.
inline CostOracle gram_cost(const GramSequence& a, const GramSequence& b) {
    std::vector<double> tr_a(a.centered.size()), tr_b(b.centered.size());
    for (std::size_t i = 0; i < a.centered.size(); ++i) tr_a[i] = a.centered[i].squaredNorm();
    for (std::size_t j = 0; j < b.centered.size(); ++j) tr_b[j] = b.centered[j].squaredNorm();
    CostOracle oracle;
    oracle.rows = static_cast<int>(a.centered.size());
    oracle.cols = static_cast<int>(b.centered.size());
    oracle.fn = [ja = a.centered, jb = b.centered, tr_a, tr_b](int i, int j) {
        const Eigen::Matrix3d cross = ja[size_t(i)].transpose() * jb[size_t(j)];
        const double nuclear = cross.jacobiSvd().singularValues().sum();
        return std::max(0.0, tr_a[size_t(i)] + tr_b[size_t(j)] - 2.0 * nuclear);
    };
    return oracle;
}

}  // namespace motionsync
