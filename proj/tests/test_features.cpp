#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "motionsync/features/frenet.hpp"
#include "motionsync/features/gram.hpp"
#include "motionsync/features/sphere.hpp"
#include "motionsync/features/srvt.hpp"
#include "motionsync/synth.hpp"
#include "test_util.hpp"

using namespace motionsync;
using Catch::Approx;
constexpr double tau_circle = 2.0 * std::numbers::pi;

namespace {

std::vector<double> uniform_times(int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[size_t(i)] = double(i) / (n - 1);
    return t;
}

}  // namespace

// ---------------------------------------------------------------- SRVT on R^3

TEST_CASE("srvt_r3 of a unit-speed line is exactly constant") {
    const int n = 40;
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[size_t(i)] = Eigen::Vector3d(double(i) / (n - 1), 0.0, 0.0);
    const SrvCurve srv = srvt_r3(c, uniform_times(n));
    REQUIRE(srv.q.size() == size_t(n - 1));
    for (const auto& q : srv.q) {
        CHECK(q.x() == Approx(1.0).margin(1e-13));
        CHECK(q.y() == 0.0);
        CHECK(q.z() == 0.0);
    }
}

TEST_CASE("srvt_r3 of a constant curve is zero") {
    std::vector<Eigen::Vector3d> c(10, Eigen::Vector3d(0.3, -0.2, 1.0));
    const SrvCurve srv = srvt_r3(c, uniform_times(10));
    for (const auto& q : srv.q) CHECK(q.norm() == 0.0);
}

TEST_CASE("srvt_r3 matches the analytic transform of c(t) = t^2 at midpoints") {
    const int n = 50;
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    const auto times = uniform_times(n);
    for (int i = 0; i < n; ++i) c[size_t(i)] = Eigen::Vector3d(times[size_t(i)] * times[size_t(i)], 0.0, 0.0);
    const SrvCurve srv = srvt_r3(c, times);
    for (std::size_t i = 0; i < srv.q.size(); ++i) {
        // forward difference of t^2 equals the derivative at the midpoint,
        // so q = sqrt(2 t_mid) holds to round-off here
        CHECK(srv.q[i].x() == Approx(std::sqrt(2.0 * srv.times[i])).margin(1e-12));
    }
}

TEST_CASE("srvt halves reparameterization sensitivity as the grid refines") {
    const auto curve = [](double t) {
        return Eigen::Vector3d(std::sin(tau_circle * t), 0.5 * std::cos(tau_circle * t), t);
    };
    const auto curve_d = [](double t) {
        return Eigen::Vector3d(tau_circle * std::cos(tau_circle * t),
                               -0.5 * tau_circle * std::sin(tau_circle * t), 1.0);
    };
    const Diffeomorphism phi = testutil::smooth_warp(0.3, 4001);
    const auto residual = [&](int n) {
        const auto times = uniform_times(n);
        std::vector<Eigen::Vector3d> warped(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) warped[size_t(i)] = curve(phi(times[size_t(i)]));
        const SrvCurve srv = srvt_r3(warped, times);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < size_t(n); ++i) {
            const double t0 = times[i], t1 = times[i + 1];
            const double dphi = (phi(t1) - phi(t0)) / (t1 - t0);
            const Eigen::Vector3d v = curve_d(phi(srv.times[i]));
            const Eigen::Vector3d expected = v / std::sqrt(v.norm()) * std::sqrt(dphi);
            acc += (srv.q[i] - expected).squaredNorm() * (t1 - t0);
        }
        return acc;
    };
    const double coarse = residual(600);
    const double fine = residual(1200);
    CHECK(coarse < 1e-3);
    CHECK(fine < coarse / 2.0);
}

TEST_CASE("srv_cost basics") {
    const int n = 30;
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / (n - 1);
        c[size_t(i)] = Eigen::Vector3d(std::cos(t), std::sin(2 * t), t * t);
    }
    const SrvCurve srv = srvt_r3(c, uniform_times(n));
    const CostOracle same = srv_cost(srv, srv);
    for (int i = 0; i < same.rows; ++i) CHECK(same(i, i) == 0.0);

    SrvCurve qa, qb;
    qa.q = {Eigen::Vector3d(1, 0, 0)};
    qa.times = {0.5};
    qb.q = {Eigen::Vector3d(0, 1, 0)};
    qb.times = {0.5};
    const CostOracle cross = srv_cost(qa, qb);
    CHECK(cross(0, 0) == Approx(2.0).margin(1e-15));

    for (int i = 0; i < same.rows; i += 7)
        for (int j = 0; j < same.cols; j += 5) CHECK(same(i, j) >= 0.0);
    CHECK(same.evaluations > 0);
}

// ------------------------------------------------------------- Gram matrices

TEST_CASE("gram_sequence of coincident joints vanishes, pairs split +-1") {
    SkeletonTopology topo;
    topo.joint_names = {"a", "b"};
    std::vector<std::vector<Eigen::Vector3d>> frames{
        {Eigen::Vector3d(0.7, 0.7, 0.7), Eigen::Vector3d(0.7, 0.7, 0.7)},
        {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)}};
    const Motion m = make_motion(topo, {0.0, 1.0}, std::move(frames));
    const GramSequence g = gram_sequence(m, {0, 1});
    CHECK(g.gram[0].cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK((g.gram[1] - expected).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-14));
}

TEST_CASE("gram_sequence is invariant under global rotation and translation") {
    const Motion m = synth_motion({40, {}, 0.0, 2});
    std::vector<int> active(10);
    for (int j = 0; j < 10; ++j) active[size_t(j)] = j;
    const GramSequence base = gram_sequence(m, active);

    Motion moved = m;
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.83, Eigen::Vector3d(0.2, -0.5, 0.6).normalized())).toRotationMatrix();
    const Eigen::Vector3d shift(4.0, -2.5, 1.0);
    for (auto& pose : moved.frames)
        for (auto& joint : pose) joint = rot * joint + shift;
    const GramSequence rotated = gram_sequence(moved, active);
    for (std::size_t f = 0; f < base.gram.size(); ++f) {
        const double scale = std::max(1.0, base.gram[f].cwiseAbs().maxCoeff());
        CHECK((base.gram[f] - rotated.gram[f]).cwiseAbs().maxCoeff() / scale < 1e-9);
    }
}

TEST_CASE("psd_distance closed-form cases") {
    Eigen::MatrixXd g1(1, 1), g2(1, 1);
    g1 << 4.0;
    g2 << 1.0;
    CHECK(psd_distance(g1, g1) == 0.0);
    CHECK(psd_distance(g1, g2) == Approx(1.0).margin(1e-12));  // 4 + 1 - 2*2

    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd g(3, 3);
    g << 2, 1, 0, 1, 3, 0.5, 0, 0.5, 1;
    CHECK(psd_distance(zero, g) == Approx(std::sqrt(g.trace())).margin(1e-12));
}

TEST_CASE("psd_distance is symmetric and separates distinct inputs") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd j1 = Eigen::MatrixXd::NullaryExpr(
            5, 3, [&]() { return motionsync::detail::uniform_in(gen, -1.0, 1.0); });
        Eigen::MatrixXd j2 = Eigen::MatrixXd::NullaryExpr(
            5, 3, [&]() { return motionsync::detail::uniform_in(gen, -1.0, 1.0); });
        const Eigen::MatrixXd a = j1 * j1.transpose();
        const Eigen::MatrixXd b = j2 * j2.transpose();
        CHECK(psd_distance(a, b) == Approx(psd_distance(b, a)).margin(1e-10));
        if ((a - b).norm() > 1e-6) CHECK(psd_distance(a, b) > 0.0);
    }
}

TEST_CASE("psd_distance rejects invalid inputs") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, -0.5, 1;
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(psd_distance(asym, id), std::invalid_argument);
    Eigen::MatrixXd indef(2, 2);
    indef << 1, 0, 0, -0.5;
    CHECK_THROWS_AS(psd_distance(indef, id), std::invalid_argument);
}

TEST_CASE("gram_cost equals squared psd_distance") {
    const Motion a = synth_motion({25, {}, 0.0, 4});
    const Motion b = synth_motion({20, {}, 0.0, 6});
    std::vector<int> active(10);
    for (int j = 0; j < 10; ++j) active[size_t(j)] = j;
    const GramSequence ga = gram_sequence(a, active);
    const GramSequence gb = gram_sequence(b, active);
    const CostOracle cost = gram_cost(ga, gb);
    for (int i = 0; i < cost.rows; i += 4) {
        for (int j = 0; j < cost.cols; j += 3) {
            const double d = psd_distance(ga.gram[size_t(i)], gb.gram[size_t(j)]);
            CHECK(cost(i, j) == Approx(d * d).margin(1e-7));
        }
    }
}

// ------------------------------------------------------------- moving frames

namespace {

FrenetData frenet_of_circle(int n, double radius) {
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    const auto times = uniform_times(n);
    for (int i = 0; i < n; ++i) {
        const double a = tau_circle * times[size_t(i)];
        c[size_t(i)] = Eigen::Vector3d(radius * std::cos(a), radius * std::sin(a), 0.25);
    }
    return frenet_frames(c, times);
}

FrenetData frenet_of_helix(int n, double a, double b, double turns) {
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    const auto times = uniform_times(n);
    for (int i = 0; i < n; ++i) {
        const double th = turns * tau_circle * times[size_t(i)];
        c[size_t(i)] = Eigen::Vector3d(a * std::cos(th), a * std::sin(th), b * th);
    }
    return frenet_frames(c, times);
}

double max_interior_error(const std::vector<double>& values, double expected) {
    double worst = 0.0;
    for (std::size_t r = 3; r + 3 < values.size(); ++r)
        worst = std::max(worst, std::abs(values[r] - expected));
    return worst;
}

}  // namespace

TEST_CASE("frenet curvature/torsion converge on the circle at second order") {
    const double radius = 2.0;
    const FrenetData coarse = frenet_of_circle(1000, radius);
    const FrenetData fine = frenet_of_circle(2000, radius);
    const double err_coarse = max_interior_error(coarse.curvature, 1.0 / radius);
    const double err_fine = max_interior_error(fine.curvature, 1.0 / radius);
    CHECK(err_fine < 1e-3 / radius);  // within 0.1% relative
    CHECK(err_fine < err_coarse / 3.0);
    CHECK(max_interior_error(fine.torsion, 0.0) < 1e-6);
}

TEST_CASE("frenet curvature/torsion converge on the helix at second order") {
    const double a = 1.0, b = 0.5;
    const double kappa = a / (a * a + b * b), torsion = b / (a * a + b * b);
    const FrenetData coarse = frenet_of_helix(1000, a, b, 2.0);
    const FrenetData fine = frenet_of_helix(2000, a, b, 2.0);
    CHECK(max_interior_error(fine.curvature, kappa) < 0.01 * kappa);
    CHECK(max_interior_error(fine.torsion, torsion) < 0.01 * torsion);
    CHECK(max_interior_error(fine.curvature, kappa) <
          max_interior_error(coarse.curvature, kappa) / 3.0);
    CHECK(max_interior_error(fine.torsion, torsion) <
          max_interior_error(coarse.torsion, torsion) / 3.0);
}

TEST_CASE("frenet frames are special orthogonal") {
    const FrenetData helix = frenet_of_helix(300, 0.8, 0.3, 1.5);
    for (const auto& frame : helix.frames) {
        CHECK((frame.transpose() * frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
              1e-6);
        CHECK(frame.determinant() == Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("frenet on a straight line: zero curvature, torsion undefined") {
    const int n = 50;
    std::vector<Eigen::Vector3d> c(static_cast<std::size_t>(n));
    const auto times = uniform_times(n);
    for (int i = 0; i < n; ++i)
        c[size_t(i)] = Eigen::Vector3d(1.0, -2.0, 0.5) * times[size_t(i)];
    const FrenetData line = frenet_frames(c, times);
    for (std::size_t r = 0; r < line.curvature.size(); ++r) {
        CHECK(line.curvature[r] < 1e-8);
        CHECK(line.torsion_defined[r] == 0);
    }
    CHECK_THROWS_AS(frenet_frames({c[0], c[1], c[2]}, {0.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(frenet_frames(std::vector<Eigen::Vector3d>(10, Eigen::Vector3d::Zero()),
                                  uniform_times(10)),
                    std::invalid_argument);
}

TEST_CASE("frenet_cost combines curvature and torsion gaps") {
    FrenetData a, b;
    a.curvature = {1.0};
    a.torsion = {0.3};
    a.torsion_defined = {1};
    b.curvature = {3.0};
    b.torsion = {0.3};
    b.torsion_defined = {1};
    CHECK(frenet_cost(a, b)(0, 0) == Approx(4.0).margin(1e-15));

    b.torsion = {0.8};
    CHECK(frenet_cost(a, b, 2.0)(0, 0) == Approx(4.0 + 2.0 * 0.25).margin(1e-12));

    b.torsion_defined = {0};  // undefined torsion drops the term
    CHECK(frenet_cost(a, b, 2.0)(0, 0) == Approx(4.0).margin(1e-15));

    const FrenetData helix = frenet_of_helix(100, 1.0, 0.4, 1.0);
    const CostOracle same = frenet_cost(helix, helix);
    for (int i = 0; i < same.rows; ++i) CHECK(same(i, i) == 0.0);

    // swapping curve roles transposes the cost grid
    const FrenetData circ = frenet_of_circle(80, 1.5);
    const CostOracle fwd = frenet_cost(helix, circ);
    const CostOracle bwd = frenet_cost(circ, helix);
    for (int i = 0; i < fwd.rows; i += 9)
        for (int j = 0; j < fwd.cols; j += 7) CHECK(fwd(i, j) == bwd(j, i));
}

// ------------------------------------------------------------ curves on S^2

TEST_CASE("sphere_curve normalizes the joint-to-center direction") {
    SkeletonTopology topo;
    topo.joint_names = {"center", "joint"};
    std::vector<std::vector<Eigen::Vector3d>> frames;
    std::vector<double> raw_times;
    for (int i = 0; i < 3; ++i) {
        raw_times.push_back(i);
        frames.push_back({Eigen::Vector3d(0.1 * i, 0, 0),
                          Eigen::Vector3d(0.1 * i, 0, 0) + Eigen::Vector3d(0, 0, 5)});
    }
    const Motion m = make_motion(topo, raw_times, std::move(frames));
    const SphereCurve s = sphere_curve(m, 1, 0);
    for (const auto& u : s.u) CHECK((u - Eigen::Vector3d(0, 0, 1)).norm() == Approx(0.0).margin(1e-15));

    const SphereCurve diag = make_sphere_curve({Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(1, 1, 0)},
                                               {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()},
                                               {0.0, 1.0});
    CHECK(diag.u[0].x() == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK(diag.u[0].y() == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));

    CHECK_THROWS_AS(sphere_curve(m, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_sphere_curve({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)},
                                      {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 0, 0)},
                                      {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("sphere curves from motions stay unit to 1e-12") {
    const Motion m = synth_motion({80, {}, 0.002, 12});
    const SphereCurve s = sphere_curve(m, m.topology.joint_index("Racket hand"),
                                       m.topology.joint_index("Spine low"));
    for (const auto& u : s.u) CHECK(std::abs(u.norm() - 1.0) < 1e-12);
}

TEST_CASE("sphere log and transport agree with great-circle geometry") {
    const Eigen::Vector3d p(0, 0, 1);
    const Eigen::Vector3d q(std::sin(0.7), 0, std::cos(0.7));
    const Eigen::Vector3d log_pq = sphere_log(p, q);
    CHECK(log_pq.norm() == Approx(0.7).margin(1e-12));
    CHECK(log_pq.dot(p) == Approx(0.0).margin(1e-12));

    // transporting the geodesic's own tangent lands on the tangent at q
    const Eigen::Vector3d moved = sphere_parallel_transport(p, q, log_pq / log_pq.norm());
    const Eigen::Vector3d expected = Eigen::Vector3d(std::cos(0.7), 0, -std::sin(0.7));
    CHECK((moved - expected).norm() == Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(sphere_log(p, Eigen::Vector3d(0, 0, -1)), std::invalid_argument);
}

TEST_CASE("sphere_srv_cost on equal-speed orthogonal great circles is flat") {
    const double speed = 0.8;
    const int n = 20;
    SphereCurve a, b;
    a.times = b.times = uniform_times(n);
    for (int i = 0; i < n; ++i) {
        const double s = speed * a.times[size_t(i)];
        a.u.emplace_back(std::sin(s), 0.0, std::cos(s));
        b.u.emplace_back(0.0, std::sin(s), std::cos(s));
    }
    const CostOracle cost = sphere_srv_cost(a, b);
    for (int i = 0; i < cost.rows; ++i)
        for (int j = 0; j < cost.cols; ++j)
            CHECK(cost(i, j) == Approx(2.0 * speed).margin(1e-9));

    const CostOracle self = sphere_srv_cost(a, a);
    for (int i = 0; i < self.rows; ++i) CHECK(self(i, i) == 0.0);
}

TEST_CASE("sphere_srv_cost of constant curves is identically zero") {
    SphereCurve a;
    a.times = uniform_times(6);
    a.u.assign(6, Eigen::Vector3d(0, 1, 0));
    const CostOracle cost = sphere_srv_cost(a, a);
    for (int i = 0; i < cost.rows; ++i)
        for (int j = 0; j < cost.cols; ++j) CHECK(cost(i, j) == 0.0);
}

TEST_CASE("sphere_srv_cost is invariant when both motions rotate about z") {
    const Motion m1 = synth_motion({40, {}, 0.0, 21});
    const Diffeomorphism phi = testutil::smooth_warp(0.2, 401);
    const Motion m2 = apply_warp(m1, phi, 36);
    const int hand = m1.topology.joint_index("Racket hand");
    const int center = m1.topology.joint_index("Spine low");
    const CostOracle base = sphere_srv_cost(sphere_curve(m1, hand, center),
                                            sphere_curve(m2, hand, center));

    const Eigen::Matrix3d rot = Eigen::AngleAxisd(1.3, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    Motion r1 = m1, r2 = m2;
    for (auto* motion : {&r1, &r2})
        for (auto& pose : motion->frames)
            for (auto& joint : pose) joint = rot * joint;
    const CostOracle rotated = sphere_srv_cost(sphere_curve(r1, hand, center),
                                               sphere_curve(r2, hand, center));
    for (int i = 0; i < base.rows; i += 3)
        for (int j = 0; j < base.cols; j += 5)
            CHECK(rotated(i, j) == Approx(base(i, j)).margin(1e-6));
}
