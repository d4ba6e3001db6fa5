#include "rqt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rqt {
namespace {

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

EgoPose ego_pose_at(const ScenarioConfig& cfg, double t) {
    EgoPose pose;
    pose.timestamp = t;
    switch (cfg.ego_path) {
        case EgoPath::kStatic:
            break;
        case EgoPath::kStraight:
            pose.translation = Eigen::Vector3d(cfg.ego_speed * t, 0.0, 0.0);
            break;
        case EgoPath::kArc: {
            const double w = cfg.ego_turn_rate;
            const double heading = w * t;
            if (std::abs(w) > 1e-12) {
                pose.translation = Eigen::Vector3d(cfg.ego_speed / w * std::sin(heading),
                                                   cfg.ego_speed / w * (1.0 - std::cos(heading)),
                                                   0.0);
            } else {
                pose.translation = Eigen::Vector3d(cfg.ego_speed * t, 0.0, 0.0);
            }
            pose.rotation = Eigen::AngleAxisd(heading, Eigen::Vector3d::UnitZ()).toRotationMatrix();
            break;
        }
    }
    return pose;
}

struct WorldObject {
    int64_t id;
    Eigen::Vector3d p0;
    Eigen::Vector3d velocity;
    Eigen::Vector3d dims;
    double yaw;
};

}  // namespace

GroundTruthLog generate_scenario(const ScenarioConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("generate_scenario: invalid config");

    Rng rng(derive_seed(cfg.rng_seed, "scenario"));
    std::vector<WorldObject> objects;
    objects.reserve(cfg.num_objects);
    for (int i = 0; i < cfg.num_objects; ++i) {
        WorldObject o;
        o.id = i;
        o.p0 = Eigen::Vector3d(rng.uniform(cfg.region_min, cfg.region_max),
                               rng.uniform(cfg.region_min, cfg.region_max), 0.0);
        const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
        const double heading = rng.uniform(-kPi, kPi);
        o.velocity = Eigen::Vector3d(speed * std::cos(heading), speed * std::sin(heading), 0.0);
        o.dims = Eigen::Vector3d(rng.uniform(1.6, 2.2), rng.uniform(3.5, 5.0),
                                 rng.uniform(1.4, 1.9));
        o.yaw = wrap_angle(heading);
        objects.push_back(o);
    }

    const EgoPose world;  // identity frame the objects live in
    GroundTruthLog log;
    log.reserve(cfg.duration_frames);
    for (int f = 0; f < cfg.duration_frames; ++f) {
        const double t = f / cfg.frame_rate;
        GtFrame frame;
        frame.frame = f;
        frame.timestamp = t;
        frame.ego = ego_pose_at(cfg, t);
        for (const auto& o : objects) {
            Anchor3D global;
            global.center = o.p0 + o.velocity * t;
            global.dims = o.dims;
            global.yaw = o.yaw;
            global.velocity = o.velocity;
            frame.objects.push_back(GtObject{o.id, transform_anchor(global, world, frame.ego, 0.0)});
        }
        log.push_back(std::move(frame));
    }
    return log;
}

std::vector<Detection> pseudo_model(const GtFrame& frame, const std::vector<Instance>& temporal,
                                    const std::vector<Instance>& current,
                                    const ScenarioConfig& cfg, Rng& rng) {
    const int n_t = static_cast<int>(temporal.size());
    const int n_cur = static_cast<int>(current.size());
    const int total = n_t + n_cur;

    auto slot_anchor = [&](int s) -> const Anchor3D& {
        return s < n_t ? temporal[s].anchor : current[s - n_t].anchor;
    };

    // Claim pass: temporal slots inside the gate first, then any current slot.
    std::vector<char> claimed(total, false);
    std::vector<int> slot_of_object(frame.objects.size(), -1);
    for (size_t oi = 0; oi < frame.objects.size(); ++oi) {
        const Anchor3D& gt = frame.objects[oi].anchor;
        int best = -1;
        double best_d = cfg.gate_radius;
        for (int s = 0; s < n_t; ++s) {
            if (claimed[s]) continue;
            double d = center_distance(slot_anchor(s), gt);
            if (d <= best_d) {
                best_d = d;
                best = s;
            }
        }
        if (best < 0) {
            best_d = std::numeric_limits<double>::infinity();
            for (int s = n_t; s < total; ++s) {
                if (claimed[s]) continue;
                double d = center_distance(slot_anchor(s), gt);
                if (d < best_d) {
                    best_d = d;
                    best = s;
                }
            }
        }
        if (best >= 0) {
            claimed[best] = true;
            slot_of_object[oi] = best;
        }
    }

    // Baseline: every slot echoes its own anchor at background confidence.
    std::vector<Detection> out(total);
    for (int s = 0; s < total; ++s) {
        out[s].anchor = slot_anchor(s);
        out[s].confidence = clip(rng.gauss(cfg.unclaimed_conf_mean, cfg.unclaimed_conf_std),
                                 0.0, 0.2);
    }

    for (size_t oi = 0; oi < frame.objects.size(); ++oi) {
        const int s = slot_of_object[oi];
        if (s < 0) continue;
        const GtObject& obj = frame.objects[oi];
        Anchor3D det = obj.anchor;
        const DetectionNoise& dn = cfg.detection_noise;
        if (!dn.zero()) {
            for (int c = 0; c < 3; ++c) det.center[c] += rng.gauss(0.0, dn.position);
            for (int c = 0; c < 3; ++c)
                det.dims[c] = std::max(1e-3, det.dims[c] + rng.gauss(0.0, dn.dims));
            det.yaw = wrap_angle(det.yaw + rng.gauss(0.0, dn.yaw));
            for (int c = 0; c < 3; ++c) det.velocity[c] += rng.gauss(0.0, dn.velocity);
        }
        out[s].anchor = det;

        bool scripted = std::find(cfg.scripted_dropouts.begin(), cfg.scripted_dropouts.end(),
                                  std::make_pair(frame.frame, obj.id)) !=
                        cfg.scripted_dropouts.end();
        bool dropped = scripted || (cfg.dropout_prob > 0.0 && rng.bernoulli(cfg.dropout_prob));
        out[s].confidence = dropped
                                ? clip(rng.gauss(cfg.unclaimed_conf_mean, cfg.unclaimed_conf_std),
                                       0.0, 0.2)
                                : clip(rng.gauss(cfg.claimed_conf_mean, cfg.claimed_conf_std),
                                       0.3, 1.0);
    }

    if (cfg.false_positive_rate > 0.0) {
        int nfp = static_cast<int>(cfg.false_positive_rate);
        if (rng.bernoulli(cfg.false_positive_rate - nfp)) ++nfp;
        std::vector<int> free;
        for (int s = n_t; s < total; ++s)
            if (!claimed[s]) free.push_back(s);
        for (int i = 0; i < nfp && !free.empty(); ++i) {
            int pick = rng.uniform_int(0, static_cast<int>(free.size()) - 1);
            int s = free[pick];
            free.erase(free.begin() + pick);
            out[s].confidence =
                clip(rng.gauss(cfg.claimed_conf_mean, cfg.claimed_conf_std), 0.3, 1.0);
        }
    }
    return out;
}

std::vector<Anchor3D> make_grid_anchors(int n, double region_min, double region_max) {
    if (n <= 0) throw std::invalid_argument("make_grid_anchors: n must be positive");
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::vector<Anchor3D> anchors;
    anchors.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int r = i / side, c = i % side;
        Anchor3D a;
        const double step = (region_max - region_min) / side;
        a.center = Eigen::Vector3d(region_min + (c + 0.5) * step, region_min + (r + 0.5) * step,
                                   0.0);
        a.dims = Eigen::Vector3d(2.0, 4.0, 1.5);
        anchors.push_back(a);
    }
    return anchors;
}

}  // namespace rqt
