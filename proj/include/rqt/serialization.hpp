#pragma once

#include <nlohmann/json.hpp>

#include "rqt/denoising.hpp"
#include "rqt/metrics.hpp"
#include "rqt/simulator.hpp"
#include "rqt/tracker.hpp"

// JSON (de)serialization for every record that crosses the CLI boundary.
// Each JSONL line type carries a "schema" field; bump the suffix on layout
// changes.

namespace rqt {

inline constexpr const char* kGtFrameSchema = "gt_frame/1";
inline constexpr const char* kModelFrameSchema = "model_frame/1";
inline constexpr const char* kTrackFrameSchema = "track_frame/1";
inline constexpr const char* kHeaderSchema = "header/1";
inline constexpr const char* kBankSchema = "bank/1";

using json = nlohmann::json;

inline void to_json(json& j, const Anchor3D& a) {
    j = json{{"center", {a.center.x(), a.center.y(), a.center.z()}},
             {"dims", {a.dims.x(), a.dims.y(), a.dims.z()}},
             {"yaw", a.yaw},
             {"velocity", {a.velocity.x(), a.velocity.y(), a.velocity.z()}}};
}

inline void from_json(const json& j, Anchor3D& a) {
    const auto& c = j.at("center");
    const auto& d = j.at("dims");
    const auto& v = j.at("velocity");
    a.center = Eigen::Vector3d(c.at(0), c.at(1), c.at(2));
    a.dims = Eigen::Vector3d(d.at(0), d.at(1), d.at(2));
    a.yaw = j.at("yaw");
    a.velocity = Eigen::Vector3d(v.at(0), v.at(1), v.at(2));
}

inline void to_json(json& j, const EgoPose& p) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rot.push_back(p.rotation(r, c));
    j = json{{"rotation", rot},
             {"translation", {p.translation.x(), p.translation.y(), p.translation.z()}},
             {"timestamp", p.timestamp}};
}

inline void from_json(const json& j, EgoPose& p) {
    const auto& rot = j.at("rotation");
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) p.rotation(r, c) = rot.at(r * 3 + c);
    const auto& t = j.at("translation");
    p.translation = Eigen::Vector3d(t.at(0), t.at(1), t.at(2));
    p.timestamp = j.at("timestamp");
}

inline void to_json(json& j, const Instance& inst) {
    j = json{{"confidence", inst.confidence}, {"anchor", inst.anchor}};
    if (inst.id)
        j["id"] = *inst.id;
    else
        j["id"] = nullptr;
}

inline void from_json(const json& j, Instance& inst) {
    inst.confidence = j.at("confidence");
    inst.anchor = j.at("anchor").get<Anchor3D>();
    const auto& id = j.at("id");
    inst.id = id.is_null() ? std::nullopt : std::optional<int64_t>(id.get<int64_t>());
}

inline void to_json(json& j, const Detection& d) {
    j = json{{"confidence", d.confidence}, {"anchor", d.anchor}};
}

inline void from_json(const json& j, Detection& d) {
    d.confidence = j.at("confidence");
    d.anchor = j.at("anchor").get<Anchor3D>();
}

inline void to_json(json& j, const GtObject& o) {
    j = json{{"id", o.id}, {"anchor", o.anchor}};
}

inline void from_json(const json& j, GtObject& o) {
    o.id = j.at("id");
    o.anchor = j.at("anchor").get<Anchor3D>();
}

inline void to_json(json& j, const GtFrame& f) {
    j = json{{"schema", kGtFrameSchema},
             {"frame", f.frame},
             {"timestamp", f.timestamp},
             {"ego", f.ego},
             {"objects", f.objects}};
}

inline void from_json(const json& j, GtFrame& f) {
    f.frame = j.at("frame");
    f.timestamp = j.at("timestamp");
    f.ego = j.at("ego").get<EgoPose>();
    f.objects = j.at("objects").get<std::vector<GtObject>>();
}

inline void to_json(json& j, const NoisySample& s) {
    j = json{{"anchor", s.anchor},
             {"group", s.group},
             {"band", s.band == NoiseBand::kInner ? "inner" : "outer"},
             {"gt_index", s.gt_index},
             {"positive_gt", s.positive_gt}};
}

inline void from_json(const json& j, NoisySample& s) {
    s.anchor = j.at("anchor").get<Anchor3D>();
    s.group = j.at("group");
    s.band = j.at("band").get<std::string>() == "inner" ? NoiseBand::kInner : NoiseBand::kOuter;
    s.gt_index = j.at("gt_index");
    s.positive_gt = j.at("positive_gt");
}

inline void to_json(json& j, const NoiseGroupSet& gs) {
    j = json{{"num_gt", gs.num_gt}, {"num_groups", gs.num_groups}, {"samples", gs.samples}};
}

inline void from_json(const json& j, NoiseGroupSet& gs) {
    gs.num_gt = j.at("num_gt");
    gs.num_groups = j.at("num_groups");
    gs.samples = j.at("samples").get<std::vector<NoisySample>>();
}

inline void to_json(json& j, const AttentionMask& m) {
    json rows = json::array();
    for (int q = 0; q < m.rows; ++q) {
        json row = json::array();
        for (int k = 0; k < m.cols; ++k) row.push_back(m.at(q, k) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    j = json{{"rows", m.rows}, {"cols", m.cols}, {"allowed", rows}};
}

inline void to_json(json& j, const TrackingMetrics& m) {
    j = json{{"AMOTA", m.amota}, {"AMOTP", m.amotp}, {"IDS", m.ids},    {"Recall", m.recall},
             {"MOTA", m.mota},   {"MOTP", m.motp},   {"MOTAR", m.motar}};
}

inline void to_json(json& j, const TrackerConfig& c) {
    j = json{{"threshold", c.threshold}, {"decay", c.decay}};
}

inline void from_json(const json& j, TrackerConfig& c) {
    c.threshold = j.value("threshold", c.threshold);
    c.decay = j.value("decay", c.decay);
}

inline void to_json(json& j, const BankConfig& c) {
    j = json{{"num_current", c.num_current}, {"num_temporal", c.num_temporal}};
}

inline void from_json(const json& j, BankConfig& c) {
    c.num_current = j.value("num_current", c.num_current);
    c.num_temporal = j.value("num_temporal", c.num_temporal);
}

inline void to_json(json& j, const NoiseScales& s) {
    j = json{{"position", s.position}, {"dims", s.dims}, {"yaw", s.yaw},
             {"velocity", s.velocity}};
}

inline void to_json(json& j, const NoiseConfig& c) {
    j = json{{"num_groups", c.num_groups},
             {"num_temporal_groups", c.num_temporal_groups},
             {"scales", c.scales},
             {"rng_seed", c.rng_seed}};
}

inline void to_json(json& j, const DetectionNoise& n) {
    j = json{{"position", n.position}, {"dims", n.dims}, {"yaw", n.yaw},
             {"velocity", n.velocity}};
}

inline void to_json(json& j, const ScenarioConfig& c) {
    j = json{{"num_objects", c.num_objects},
             {"duration_frames", c.duration_frames},
             {"frame_rate", c.frame_rate},
             {"region_min", c.region_min},
             {"region_max", c.region_max},
             {"speed_min", c.speed_min},
             {"speed_max", c.speed_max},
             {"ego_path", c.ego_path == EgoPath::kStatic ? "static"
                          : c.ego_path == EgoPath::kStraight ? "straight" : "arc"},
             {"ego_speed", c.ego_speed},
             {"ego_turn_rate", c.ego_turn_rate},
             {"detection_noise", c.detection_noise},
             {"dropout_prob", c.dropout_prob},
             {"false_positive_rate", c.false_positive_rate},
             {"gate_radius", c.gate_radius},
             {"rng_seed", c.rng_seed}};
}

// Checkpoint of a tracking session (the `--resume` payload).
struct BankCheckpoint {
    std::vector<Instance> temporal;
    int64_t next_id = 0;
    double last_timestamp = 0.0;
    EgoPose last_pose;
};

inline void to_json(json& j, const BankCheckpoint& b) {
    j = json{{"schema", kBankSchema},
             {"temporal", b.temporal},
             {"next_id", b.next_id},
             {"last_timestamp", b.last_timestamp},
             {"last_pose", b.last_pose}};
}

inline void from_json(const json& j, BankCheckpoint& b) {
    b.temporal = j.at("temporal").get<std::vector<Instance>>();
    b.next_id = j.at("next_id");
    b.last_timestamp = j.at("last_timestamp");
    b.last_pose = j.at("last_pose").get<EgoPose>();
}

}  // namespace rqt
