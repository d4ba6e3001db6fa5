#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rqt/instance_bank.hpp"

namespace rqt {

struct TrackerConfig {
    double threshold = 0.25;  // T: confidence required to lock onto a target
    double decay = 0.6;       // S: per-frame decay of undetected temporal confidence

    bool valid() const {
        return threshold > 0.0 && threshold < 1.0 && decay > 0.0 && decay < 1.0;
    }
};

// One refined (confidence, anchor) pair out of the model.
struct Detection {
    double confidence = 0.0;
    Anchor3D anchor;
};

struct TrackFrameResult {
    std::vector<Instance> results;           // confirmed tracks, all carrying ids
    std::vector<Instance> updated_temporal;  // next frame's temporal set, size N_t
};

// Session-scoped monotonic id source; ids are never reused.
class IdGenerator {
public:
    IdGenerator() = default;
    explicit IdGenerator(int64_t start) : next_(start) {}

    int64_t fresh() { return next_++; }
    int64_t peek() const { return next_; }

private:
    int64_t next_ = 0;
};

// One tracking step. model_out holds N_t + num_current refined instances whose
// first N_t entries correspond positionally to temporal_in. Per entry: emit
// with an inherited or fresh id when confidence clears the threshold, then
// decay the temporal confidence; the next temporal set is the post-decay
// top-N_t.
TrackFrameResult track_frame(const std::vector<Detection>& model_out,
                             const std::vector<Instance>& temporal_in, int num_current,
                             const TrackerConfig& cfg, IdGenerator& ids);

// Per-frame session input: the model's refined outputs plus the ego pose they
// are expressed in.
struct SessionFrame {
    std::vector<Detection> model_out;
    EgoPose ego;
};

// Stateful frame-by-frame loop: propagate the temporal set into each new ego
// frame, then run track_frame. Frames must be time-ordered.
class TrackerSession {
public:
    TrackerSession(TrackerConfig cfg, BankConfig bank_cfg, std::vector<Instance> initial_temporal);

    // Restores a checkpointed session (temporal bank + id counter state).
    TrackerSession(TrackerConfig cfg, BankConfig bank_cfg, std::vector<Instance> initial_temporal,
                   int64_t next_id, double last_timestamp, const EgoPose& last_pose);

    TrackFrameResult step(const std::vector<Detection>& model_out, const EgoPose& ego);

    const std::vector<Instance>& temporal() const { return temporal_; }
    int64_t next_id() const { return ids_.peek(); }
    double last_timestamp() const { return last_timestamp_; }
    const EgoPose& last_pose() const { return last_pose_; }
    bool started() const { return started_; }

private:
    TrackerConfig cfg_;
    BankConfig bank_cfg_;
    std::vector<Instance> temporal_;
    IdGenerator ids_;
    EgoPose last_pose_;
    double last_timestamp_ = 0.0;
    bool started_ = false;
};

std::vector<TrackFrameResult> run_session(const std::vector<SessionFrame>& frames,
                                          const TrackerConfig& cfg, const BankConfig& bank_cfg,
                                          std::vector<Instance> initial_temporal);

}  // namespace rqt
