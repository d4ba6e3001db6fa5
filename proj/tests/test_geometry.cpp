#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rqt/geometry.hpp"
#include "rqt/rng.hpp"

using namespace rqt;

namespace {

Anchor3D random_anchor(Rng& rng) {
    Anchor3D a;
    a.center = Eigen::Vector3d(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-3, 3));
    a.dims = Eigen::Vector3d(rng.uniform(0.5, 3), rng.uniform(0.5, 6), rng.uniform(0.5, 3));
    a.yaw = wrap_angle(rng.uniform(-kPi, kPi));
    a.velocity = Eigen::Vector3d(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-1, 1));
    return a;
}

EgoPose random_pose(Rng& rng) {
    EgoPose p;
    const double yaw = rng.uniform(-kPi, kPi);
    p.rotation = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    p.translation = Eigen::Vector3d(rng.uniform(-100, 100), rng.uniform(-100, 100), 0.0);
    p.timestamp = rng.uniform(0, 100);
    return p;
}

}  // namespace

TEST_CASE("center_distance basics") {
    Anchor3D a, b;
    CHECK(center_distance(a, b) == 0.0);
    a.center = Eigen::Vector3d(1, 0, 0);
    CHECK(center_distance(a, b) == doctest::Approx(1.0));
    a.center = Eigen::Vector3d(3, 4, 0);
    CHECK(center_distance(a, b) == doctest::Approx(5.0));
    CHECK(center_distance(a, b) == center_distance(b, a));
}

TEST_CASE("center_distance triangle inequality") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Anchor3D a = random_anchor(rng), b = random_anchor(rng), c = random_anchor(rng);
        CHECK(center_distance(a, c) <= center_distance(a, b) + center_distance(b, c) + 1e-12);
    }
}

TEST_CASE("yaw_to_unit values and norm") {
    CHECK(yaw_to_unit(0.0).isApprox(Eigen::Vector2d(0, 1), 1e-15));
    CHECK(yaw_to_unit(kPi / 2).isApprox(Eigen::Vector2d(1, 0), 1e-12));
    CHECK(yaw_to_unit(kPi).y() == doctest::Approx(-1.0));
    CHECK(std::abs(yaw_to_unit(kPi).x()) < 1e-12);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        double y = rng.uniform(-20, 20);
        CHECK(std::abs(yaw_to_unit(y).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("yaw wrapping stays in (-pi, pi] and preserves heading") {
    Rng rng(11);
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    for (int i = 0; i < 1000; ++i) {
        double y = rng.uniform(-30, 30);
        double w = wrap_angle(y);
        CHECK(w > -kPi - 1e-15);
        CHECK(w <= kPi + 1e-15);
        CHECK((yaw_to_unit(y) - yaw_to_unit(w)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("transform_anchor identity") {
    Rng rng(5);
    EgoPose id;
    for (int i = 0; i < 50; ++i) {
        Anchor3D a = random_anchor(rng);
        Anchor3D b = transform_anchor(a, id, id, 0.0);
        CHECK((a.center - b.center).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.dims - b.dims).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(a.yaw - b.yaw) < 1e-12);
        CHECK((a.velocity - b.velocity).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("transform_anchor constant velocity step") {
    EgoPose id;
    Anchor3D a;
    a.velocity = Eigen::Vector3d(1, 0, 0);
    Anchor3D b = transform_anchor(a, id, id, 0.5);
    CHECK(b.center.isApprox(Eigen::Vector3d(0.5, 0, 0), 1e-15));
}

TEST_CASE("transform_anchor 90 degree ego rotation") {
    EgoPose from, to;
    to.rotation = Eigen::AngleAxisd(kPi / 2, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    Anchor3D a;
    a.center = Eigen::Vector3d(1, 0, 0);
    a.velocity = Eigen::Vector3d(0, 2, 0);
    a.yaw = 0.0;
    Anchor3D b = transform_anchor(a, from, to, 0.0);
    // New frame axes rotated +90deg, so coordinates rotate -90deg.
    CHECK(b.center.isApprox(Eigen::Vector3d(0, -1, 0), 1e-12));
    CHECK(b.velocity.isApprox(Eigen::Vector3d(2, 0, 0), 1e-12));
    CHECK(b.yaw == doctest::Approx(-kPi / 2));
}

TEST_CASE("transform_anchor round trip") {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        Anchor3D a = random_anchor(rng);
        EgoPose p = random_pose(rng), q = random_pose(rng);
        Anchor3D back = transform_anchor(transform_anchor(a, p, q, 0.0), q, p, 0.0);
        CHECK((a.center - back.center).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(wrap_angle(a.yaw - back.yaw)) < 1e-9);
        CHECK((a.velocity - back.velocity).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("transform_anchor rejects bad input") {
    EgoPose id, bad;
    bad.rotation(0, 0) = 2.0;
    Anchor3D a;
    CHECK_THROWS_AS(transform_anchor(a, id, bad, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(transform_anchor(a, id, id, -1.0), std::invalid_argument);
}
