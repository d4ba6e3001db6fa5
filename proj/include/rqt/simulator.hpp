#pragma once

#include <cstdint>
#include <vector>

#include "rqt/instance_bank.hpp"
#include "rqt/rng.hpp"
#include "rqt/tracker.hpp"

namespace rqt {

// Per-field detection noise standard deviations.
struct DetectionNoise {
    double position = 0.0;
    double dims = 0.0;
    double yaw = 0.0;
    double velocity = 0.0;

    bool zero() const { return position == 0 && dims == 0 && yaw == 0 && velocity == 0; }
};

enum class EgoPath { kStatic, kStraight, kArc };

struct ScenarioConfig {
    int num_objects = 10;
    int duration_frames = 40;
    double frame_rate = 2.0;  // Hz

    double region_min = -40.0;  // spawn bounds in x and y, meters
    double region_max = 40.0;
    double speed_min = 0.0;
    double speed_max = 8.0;

    EgoPath ego_path = EgoPath::kStraight;
    double ego_speed = 4.0;      // m/s along the path
    double ego_turn_rate = 0.0;  // rad/s, arc path only

    DetectionNoise detection_noise;
    double dropout_prob = 0.0;         // per object per frame
    double false_positive_rate = 0.0;  // expected FP slots per frame
    // (frame, object id) pairs whose detection is forced below threshold.
    std::vector<std::pair<int, int64_t>> scripted_dropouts;

    double claimed_conf_mean = 0.8;
    double claimed_conf_std = 0.1;
    double unclaimed_conf_mean = 0.05;
    double unclaimed_conf_std = 0.03;
    double gate_radius = 2.0;  // meters, matches the metric match radius

    uint64_t rng_seed = 0;

    bool valid() const {
        return num_objects >= 0 && duration_frames >= 1 && frame_rate > 0 &&
               region_max > region_min && speed_max >= speed_min && speed_min >= 0 &&
               dropout_prob >= 0 && dropout_prob <= 1 && false_positive_rate >= 0 &&
               gate_radius > 0;
    }
};

struct GtObject {
    int64_t id = 0;
    Anchor3D anchor;  // expressed in the frame's ego frame
};

struct GtFrame {
    int frame = 0;
    double timestamp = 0.0;
    EgoPose ego;
    std::vector<GtObject> objects;
};

using GroundTruthLog = std::vector<GtFrame>;

// Constant-velocity objects plus a parametric ego path; ground truth anchors
// are re-expressed per frame in the ego frame.
GroundTruthLog generate_scenario(const ScenarioConfig& cfg);

// Stand-in for the neural refinement model. Each ground truth object is
// claimed by the nearest unclaimed temporal slot inside the gate radius
// (temporal slots model recurrent refinement and take priority), falling back
// to the nearest unclaimed current slot. Claimed slots emit the ground truth
// anchor plus detection noise at high confidence; dropouts force a claimed
// slot's confidence low; false positives push random unclaimed slots high.
std::vector<Detection> pseudo_model(const GtFrame& frame, const std::vector<Instance>& temporal,
                                    const std::vector<Instance>& current,
                                    const ScenarioConfig& cfg, Rng& rng);

// Uniform XY grid of n anchors over the scenario region, for bank seeding.
std::vector<Anchor3D> make_grid_anchors(int n, double region_min, double region_max);

}  // namespace rqt
