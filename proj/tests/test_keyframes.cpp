#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "motionsync/keyframes.hpp"
#include "motionsync/synth.hpp"
#include "test_util.hpp"

using namespace motionsync;
using Catch::Approx;

TEST_CASE("detect_keyframes on hand-built signals") {
    const Keyframes a = detect_keyframes({1.0, 0.0, 1.0});
    CHECK(a.high1 == 0);
    CHECK(a.low == 1);
    CHECK(a.high2 == 2);

    // tie rule: earliest frame wins
    const Keyframes b = detect_keyframes({0.0, 1.0, 1.0, 0.0, 2.0});
    CHECK(b.high1 == 1);
    CHECK(b.low == 3);
    CHECK(b.high2 == 4);
}

TEST_CASE("detect_keyframes on a sampled cosine") {
    std::vector<double> z(101);
    for (int i = 0; i <= 100; ++i) z[size_t(i)] = std::cos(2.0 * std::numbers::pi * i / 100.0);
    const Keyframes k = detect_keyframes(z);
    CHECK(k.high1 == 0);
    CHECK(k.low == 50);
    CHECK(k.high2 == 100);
}

TEST_CASE("detect_keyframes error cases") {
    CHECK_THROWS_AS(detect_keyframes({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(detect_keyframes({3.0, 3.0, 3.0, 3.0}), std::invalid_argument);
}

TEST_CASE("detect_keyframes is invariant under shift and positive scale") {
    std::vector<double> z(64);
    for (int i = 0; i < 64; ++i)
        z[size_t(i)] = std::sin(2.0 * std::numbers::pi * (i / 63.0 + 0.13)) +
                       0.4 * std::cos(4.0 * std::numbers::pi * i / 63.0);
    const Keyframes base = detect_keyframes(z);
    std::vector<double> shifted = z, scaled = z, negated = z;
    for (auto& v : shifted) v += 17.5;
    for (auto& v : scaled) v *= 3.25;
    for (auto& v : negated) v = -v;
    const auto same = [&](const Keyframes& k) {
        return k.high1 == base.high1 && k.low == base.low && k.high2 == base.high2;
    };
    CHECK(same(detect_keyframes(shifted)));
    CHECK(same(detect_keyframes(scaled)));
    // vertical information is directional: negation moves the keyframes
    CHECK_FALSE(same(detect_keyframes(negated)));
}

TEST_CASE("smoothing window steadies a jittery peak") {
    std::vector<double> z(41);
    for (int i = 0; i <= 40; ++i) {
        const double t = i / 40.0;
        z[size_t(i)] = std::cos(2.0 * std::numbers::pi * t) + ((i % 2 == 0) ? 0.03 : -0.03);
    }
    CHECK_NOTHROW(detect_keyframes(z, 5));
}

TEST_CASE("keyframe_correspondence maps keyframes to keyframes") {
    const Keyframes same{25, 50, 75};
    const FrameCorrespondence diag = keyframe_correspondence(same, same, 101, 101);
    REQUIRE(diag.pairs.size() == 101);
    for (int k = 0; k < 101; ++k) CHECK(diag.pairs[size_t(k)] == std::array<int, 2>{k, k});

    const Keyframes k1{25, 50, 75};
    const Keyframes k2{10, 50, 90};
    const FrameCorrespondence p = keyframe_correspondence(k1, k2, 101, 101);
    CHECK_NOTHROW(validate_path(p, 101, 101));
    const auto contains = [&](int i, int j) {
        for (const auto& pair : p.pairs)
            if (pair[0] == i && pair[1] == j) return true;
        return false;
    };
    CHECK(contains(25, 10));
    CHECK(contains(50, 50));
    CHECK(contains(75, 90));
    // linear in between: halfway points of the outer spans
    const Diffeomorphism w = keyframe_warp(k1, k2, 101, 101);
    CHECK(w(12.5 / 100.0) == Approx(5.0 / 100.0).margin(1e-12));
    CHECK(w(37.5 / 100.0) == Approx(30.0 / 100.0).margin(1e-12));
}

TEST_CASE("keyframe_warp validates its anchors") {
    CHECK_THROWS_AS(keyframe_warp({10, 5, 20}, {1, 2, 3}, 30, 30), std::invalid_argument);
    CHECK_THROWS_AS(keyframe_warp({1, 2, 40}, {1, 2, 3}, 30, 30), std::invalid_argument);
    // endpoint collisions are dropped rather than fatal
    CHECK_NOTHROW(keyframe_warp({0, 2, 4}, {0, 3, 4}, 5, 5));
}

TEST_CASE("coarse_align of a motion with itself is the identity") {
    const Motion m = synth_motion({120, {}, 0.0, 5});
    const std::vector<int> arm = {m.topology.joint_index("Racket hand"),
                                  m.topology.joint_index("Racket top")};
    const Diffeomorphism w = coarse_align(m, m, arm);
    CHECK(l1_distance(w, Diffeomorphism::identity()) < 1e-4);
}

TEST_CASE("coarse_align recovers planted keyframe shifts") {
    const Motion m = synth_motion({200, {}, 0.0, 11});
    const Diffeomorphism phi = testutil::smooth_warp(0.35, 801);
    const Motion warped = apply_warp(m, phi, 200);
    const std::vector<int> arm = {m.topology.joint_index("Racket hand"),
                                  m.topology.joint_index("Racket top")};

    // ground truth: warped(u) = m(phi(u)), so the warped clip reaches the
    // keyframe planted at reference time t at u = phi^{-1}(t)
    const Keyframes k_ref = detect_keyframes(joint_z_signal(m, arm[0]));
    const Keyframes k_in = detect_keyframes(joint_z_signal(warped, arm[0]));
    const Diffeomorphism inv = invert(phi);
    for (const auto& [in_frame, ref_frame] :
         {std::pair{k_in.high1, k_ref.high1}, {k_in.low, k_ref.low}, {k_in.high2, k_ref.high2}}) {
        const double expected = inv(ref_frame / 199.0) * 199.0;
        CHECK(std::abs(in_frame - expected) <= 1.0);
    }

    const Diffeomorphism w = coarse_align(warped, m, arm);
    CHECK(l1_distance(w, phi) < 2.0);  // percent; three interior anchors only
}

TEST_CASE("coarse_align propagates failure only when every joint fails") {
    SkeletonTopology topo;
    topo.joint_names = {"flat", "moving"};
    std::vector<double> times;
    std::vector<std::vector<Eigen::Vector3d>> frames;
    for (int i = 0; i < 40; ++i) {
        times.push_back(i);
        const double t = i / 39.0;
        frames.push_back({Eigen::Vector3d(0, 0, 1.0),
                          Eigen::Vector3d(0, 0, std::cos(2.0 * std::numbers::pi * t))});
    }
    const Motion m = make_motion(topo, times, std::move(frames));
    CHECK_NOTHROW(coarse_align(m, m, {0, 1}));  // joint 0 fails, joint 1 carries
    CHECK_THROWS_AS(coarse_align(m, m, {0}), std::invalid_argument);
}
