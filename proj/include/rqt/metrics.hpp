#pragma once

#include <cstdint>
#include <vector>

#include "rqt/instance_bank.hpp"
#include "rqt/simulator.hpp"

namespace rqt {

struct MatchConfig {
    double radius = 2.0;  // meters, center-distance gate
    std::vector<double> recall_thresholds;

    MatchConfig();
    bool valid() const;
};

// nuScenes-convention grid: 40 evenly spaced recall targets from 0.05 to 1.
std::vector<double> default_recall_grid();

struct FrameMatching {
    std::vector<std::pair<int64_t, int64_t>> matches;  // (track id, gt id)
    std::vector<double> match_distances;
    int fp = 0;
    int fn = 0;
};

// Greedy one-to-one matching in ascending center-distance order.
FrameMatching match_frame(const std::vector<Instance>& tracks,
                          const std::vector<GtObject>& gt, const MatchConfig& cfg);

// A switch is a GT object whose consecutive matched frames carry different
// track ids.
int count_id_switches(const std::vector<FrameMatching>& matchings);

struct MotaMotp {
    double mota = 0.0;
    double motp = 0.0;
};

MotaMotp mota_motp(const std::vector<FrameMatching>& matchings, int gt_total);

// Per-frame confirmed tracks, as consumed by the evaluator.
struct TrackedFrame {
    int frame = 0;
    std::vector<Instance> tracks;  // instances carry confidence and id
};

struct TrackingMetrics {
    double amota = 0.0;
    double amotp = 0.0;
    int ids = 0;
    double recall = 0.0;
    double mota = 0.0;
    double motp = 0.0;
    double motar = 0.0;
};

// Recall-threshold sweep over confidence cutoffs: per target recall r, MOTAR =
// clamp(1 - (IDS + FP + FN - (1-r) P) / (r P), 0, 1); AMOTA averages MOTAR
// over the grid with unachievable recalls contributing 0, AMOTP analogously
// averages MOTP. The scalar IDS/Recall/MOTA/MOTP/MOTAR fields are evaluated
// with every emitted track (cutoff 0).
TrackingMetrics evaluate_tracking(const std::vector<TrackedFrame>& track_log,
                                  const GroundTruthLog& gt_log, const MatchConfig& cfg);

struct ScoredDetection {
    int frame = 0;
    double score = 0.0;
    Anchor3D anchor;
};

struct PrCurve {
    std::vector<double> precision;
    std::vector<double> recall;
    double ap = 0.0;
};

// Score-sorted precision/recall sweep with center-distance matching; AP by
// trapezoidal integration over recall.
PrCurve detection_pr(const std::vector<ScoredDetection>& dets, const GroundTruthLog& gt_log,
                     double radius);

}  // namespace rqt
