#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rqt/simulator.hpp"

using namespace rqt;

namespace {

Instance slot_at(double x, double y) {
    Instance i;
    i.anchor.center = Eigen::Vector3d(x, y, 0);
    return i;
}

}  // namespace

TEST_CASE("static world with static ego repeats identically") {
    ScenarioConfig cfg;
    cfg.num_objects = 5;
    cfg.duration_frames = 8;
    cfg.speed_min = cfg.speed_max = 0.0;
    cfg.ego_path = EgoPath::kStatic;
    auto log = generate_scenario(cfg);
    REQUIRE(log.size() == 8);
    for (const auto& frame : log) {
        REQUIRE(frame.objects.size() == 5);
        for (size_t i = 0; i < frame.objects.size(); ++i) {
            CHECK(frame.objects[i].id == log[0].objects[i].id);
            CHECK((frame.objects[i].anchor.center - log[0].objects[i].anchor.center)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            CHECK(frame.objects[i].anchor.yaw == log[0].objects[i].anchor.yaw);
        }
    }
}

TEST_CASE("straight ego: constant-velocity oracle from frame 0") {
    ScenarioConfig cfg;
    cfg.num_objects = 6;
    cfg.duration_frames = 10;
    cfg.frame_rate = 2.0;
    cfg.ego_path = EgoPath::kStraight;
    cfg.ego_speed = 4.0;
    auto log = generate_scenario(cfg);

    // At frame 0 the ego sits at the world origin with identity rotation, so
    // the frame-0 anchors are the global states. Straight ego keeps identity
    // rotation, so later ego-frame centers are global minus ego translation.
    for (const auto& frame : log) {
        const double t = frame.timestamp;
        CHECK(t == doctest::Approx(frame.frame / 2.0));
        CHECK((frame.ego.translation - Eigen::Vector3d(4.0 * t, 0, 0)).cwiseAbs().maxCoeff() <
              1e-12);
        for (size_t i = 0; i < frame.objects.size(); ++i) {
            const Anchor3D& g0 = log[0].objects[i].anchor;
            Eigen::Vector3d want = g0.center + g0.velocity * t - frame.ego.translation;
            CHECK((frame.objects[i].anchor.center - want).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("single object at half-second steps") {
    // One object, static ego, 2 Hz: center advances by velocity / 2 per frame.
    ScenarioConfig cfg;
    cfg.num_objects = 1;
    cfg.duration_frames = 4;
    cfg.ego_path = EgoPath::kStatic;
    cfg.speed_min = cfg.speed_max = 1.0;
    auto log = generate_scenario(cfg);
    const Anchor3D& a0 = log[0].objects[0].anchor;
    CHECK(a0.velocity.norm() == doctest::Approx(1.0));
    for (int f = 1; f < 4; ++f) {
        Eigen::Vector3d want = a0.center + a0.velocity * (0.5 * f);
        CHECK((log[f].objects[0].anchor.center - want).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("arc ego: rotation oracle") {
    ScenarioConfig cfg;
    cfg.num_objects = 4;
    cfg.duration_frames = 6;
    cfg.ego_path = EgoPath::kArc;
    cfg.ego_speed = 3.0;
    cfg.ego_turn_rate = 0.2;
    cfg.speed_min = cfg.speed_max = 0.0;  // static objects isolate the ego transform
    auto log = generate_scenario(cfg);

    for (const auto& frame : log) {
        const double heading = 0.2 * frame.timestamp;
        Eigen::Matrix3d rot =
            Eigen::AngleAxisd(heading, Eigen::Vector3d::UnitZ()).toRotationMatrix();
        CHECK((frame.ego.rotation - rot).cwiseAbs().maxCoeff() < 1e-12);
        for (size_t i = 0; i < frame.objects.size(); ++i) {
            Eigen::Vector3d global = log[0].objects[i].anchor.center;
            Eigen::Vector3d want = rot.transpose() * (global - frame.ego.translation);
            CHECK((frame.objects[i].anchor.center - want).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("scenario generation is deterministic in the seed") {
    ScenarioConfig cfg;
    cfg.num_objects = 7;
    cfg.duration_frames = 5;
    cfg.rng_seed = 99;
    auto a = generate_scenario(cfg), b = generate_scenario(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t f = 0; f < a.size(); ++f)
        for (size_t i = 0; i < a[f].objects.size(); ++i) {
            CHECK((a[f].objects[i].anchor.center - b[f].objects[i].anchor.center)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            CHECK(a[f].objects[i].anchor.yaw == b[f].objects[i].anchor.yaw);
        }

    cfg.rng_seed = 100;
    auto c = generate_scenario(cfg);
    CHECK((a[0].objects[0].anchor.center - c[0].objects[0].anchor.center).cwiseAbs().maxCoeff() >
          0.0);
}

TEST_CASE("generate_scenario rejects invalid configs") {
    ScenarioConfig cfg;
    cfg.duration_frames = 0;
    CHECK_THROWS_AS(generate_scenario(cfg), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.region_min = 10;
    cfg.region_max = -10;
    CHECK_THROWS_AS(generate_scenario(cfg), std::invalid_argument);
}

TEST_CASE("pseudo_model: noiseless claimed slot echoes ground truth exactly") {
    ScenarioConfig cfg;
    GtFrame frame;
    GtObject obj;
    obj.id = 0;
    obj.anchor.center = Eigen::Vector3d(3.3, -1.7, 0.2);
    obj.anchor.yaw = 0.4;
    obj.anchor.velocity = Eigen::Vector3d(1, 2, 0);
    frame.objects.push_back(obj);

    std::vector<Instance> temporal{slot_at(3.0, -1.5)};
    std::vector<Instance> current{slot_at(-20, -20), slot_at(20, 20)};
    Rng rng(1);
    auto dets = pseudo_model(frame, temporal, current, cfg, rng);
    REQUIRE(dets.size() == 3);
    CHECK((dets[0].anchor.center - obj.anchor.center).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dets[0].anchor.yaw == obj.anchor.yaw);
    CHECK((dets[0].anchor.velocity - obj.anchor.velocity).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dets[0].confidence >= 0.3);
    CHECK(dets[0].confidence <= 1.0);
    // Unclaimed slots stay at background confidence and keep their own anchor.
    for (int s = 1; s < 3; ++s) {
        CHECK(dets[s].confidence <= 0.2);
        CHECK((dets[s].anchor.center - current[s - 1].anchor.center).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("pseudo_model: scripted dropout forces low confidence") {
    ScenarioConfig cfg;
    cfg.scripted_dropouts = {{4, 7}};
    GtFrame frame;
    frame.frame = 4;
    GtObject obj;
    obj.id = 7;
    frame.objects.push_back(obj);
    std::vector<Instance> temporal{slot_at(0, 0)};
    Rng rng(2);
    auto dets = pseudo_model(frame, temporal, {}, cfg, rng);
    CHECK(dets[0].confidence <= 0.2);

    // Same setup at a non-scripted frame stays high.
    frame.frame = 5;
    Rng rng2(2);
    auto dets2 = pseudo_model(frame, temporal, {}, cfg, rng2);
    CHECK(dets2[0].confidence >= 0.3);
}

TEST_CASE("pseudo_model: temporal slot takes priority inside the gate") {
    ScenarioConfig cfg;
    GtFrame frame;
    GtObject obj;
    frame.objects.push_back(obj);  // GT at origin
    std::vector<Instance> temporal{slot_at(1.0, 0)};  // inside gate, farther
    std::vector<Instance> current{slot_at(0.1, 0)};   // closer but current
    Rng rng(3);
    auto dets = pseudo_model(frame, temporal, current, cfg, rng);
    CHECK(dets[0].confidence >= 0.3);  // temporal slot claimed
    CHECK(dets[1].confidence <= 0.2);
}

TEST_CASE("pseudo_model: outside the gate falls back to nearest current slot") {
    ScenarioConfig cfg;  // gate_radius = 2.0
    GtFrame frame;
    GtObject obj;
    frame.objects.push_back(obj);
    std::vector<Instance> temporal{slot_at(3.0, 0)};  // outside gate
    std::vector<Instance> current{slot_at(30, 30), slot_at(5, 0)};
    Rng rng(4);
    auto dets = pseudo_model(frame, temporal, current, cfg, rng);
    CHECK(dets[0].confidence <= 0.2);  // temporal slot not claimed
    CHECK(dets[1].confidence <= 0.2);
    CHECK(dets[2].confidence >= 0.3);  // nearest current slot, no gate applied
    CHECK(dets[2].anchor.center.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pseudo_model: each slot claimed at most once") {
    ScenarioConfig cfg;
    GtFrame frame;
    for (int i = 0; i < 3; ++i) {
        GtObject o;
        o.id = i;
        o.anchor.center = Eigen::Vector3d(0.2 * i, 0, 0);  // all near the same slot
        frame.objects.push_back(o);
    }
    std::vector<Instance> temporal{slot_at(0, 0)};
    std::vector<Instance> current{slot_at(0.5, 0), slot_at(1.0, 0), slot_at(40, 40)};
    Rng rng(5);
    auto dets = pseudo_model(frame, temporal, current, cfg, rng);
    int high = 0;
    for (const auto& d : dets)
        if (d.confidence >= 0.3) ++high;
    CHECK(high == 3);  // three distinct slots, one per object
}

TEST_CASE("pseudo_model: false positives raise unclaimed current slots") {
    ScenarioConfig cfg;
    cfg.false_positive_rate = 2.0;
    GtFrame frame;  // no GT at all
    std::vector<Instance> current{slot_at(0, 0), slot_at(5, 0), slot_at(10, 0)};
    Rng rng(6);
    auto dets = pseudo_model(frame, {}, current, cfg, rng);
    int high = 0;
    for (const auto& d : dets)
        if (d.confidence >= 0.3) ++high;
    CHECK(high == 2);
}

TEST_CASE("pseudo_model: detection noise perturbs the claimed anchor") {
    ScenarioConfig cfg;
    cfg.detection_noise.position = 0.05;
    GtFrame frame;
    GtObject obj;
    obj.anchor.dims = Eigen::Vector3d(2, 4, 1.5);
    frame.objects.push_back(obj);
    std::vector<Instance> temporal{slot_at(0, 0)};
    Rng rng(7);
    auto dets = pseudo_model(frame, temporal, {}, cfg, rng);
    CHECK(dets[0].anchor.center.cwiseAbs().maxCoeff() > 0.0);
    CHECK(dets[0].anchor.center.cwiseAbs().maxCoeff() < 1.0);
}

TEST_CASE("make_grid_anchors covers the region with distinct centers") {
    auto anchors = make_grid_anchors(17, -40, 40);
    REQUIRE(anchors.size() == 17);
    std::set<std::pair<double, double>> seen;
    for (const auto& a : anchors) {
        CHECK(a.center.x() >= -40);
        CHECK(a.center.x() <= 40);
        CHECK(a.center.y() >= -40);
        CHECK(a.center.y() <= 40);
        CHECK(seen.insert({a.center.x(), a.center.y()}).second);
    }
    CHECK_THROWS_AS(make_grid_anchors(0, -1, 1), std::invalid_argument);
}
