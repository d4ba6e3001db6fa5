#include "rqt/tracker.hpp"

#include <stdexcept>

namespace rqt {

TrackFrameResult track_frame(const std::vector<Detection>& model_out,
                             const std::vector<Instance>& temporal_in, int num_current,
                             const TrackerConfig& cfg, IdGenerator& ids) {
    if (!cfg.valid()) throw std::invalid_argument("track_frame: invalid tracker config");
    const int n_t = static_cast<int>(temporal_in.size());
    if (static_cast<int>(model_out.size()) != n_t + num_current)
        throw std::invalid_argument("track_frame: model output length != N_t + N_cur");

    TrackFrameResult res;
    std::vector<Instance> refined;
    refined.reserve(model_out.size());

    for (int i = 0; i < static_cast<int>(model_out.size()); ++i) {
        Instance inst;
        inst.confidence = model_out[i].confidence;
        inst.anchor = model_out[i].anchor;
        inst.id = i < n_t ? temporal_in[i].id : std::nullopt;

        if (inst.confidence >= cfg.threshold) {
            if (i >= n_t || !inst.id) inst.id = ids.fresh();
            res.results.push_back(inst);
        }
        if (i < n_t) {
            inst.confidence = std::max(inst.confidence, temporal_in[i].confidence * cfg.decay);
        }
        refined.push_back(std::move(inst));
    }

    res.updated_temporal = select_topk(refined, n_t);
    return res;
}

TrackerSession::TrackerSession(TrackerConfig cfg, BankConfig bank_cfg,
                               std::vector<Instance> initial_temporal)
    : cfg_(cfg), bank_cfg_(bank_cfg), temporal_(std::move(initial_temporal)) {
    if (!cfg_.valid() || !bank_cfg_.valid())
        throw std::invalid_argument("TrackerSession: invalid config");
    if (static_cast<int>(temporal_.size()) != bank_cfg_.num_temporal)
        throw std::invalid_argument("TrackerSession: temporal set size != N_t");
}

TrackerSession::TrackerSession(TrackerConfig cfg, BankConfig bank_cfg,
                               std::vector<Instance> initial_temporal, int64_t next_id,
                               double last_timestamp, const EgoPose& last_pose)
    : TrackerSession(cfg, bank_cfg, std::move(initial_temporal)) {
    ids_ = IdGenerator(next_id);
    last_timestamp_ = last_timestamp;
    last_pose_ = last_pose;
    started_ = true;
}

TrackFrameResult TrackerSession::step(const std::vector<Detection>& model_out,
                                      const EgoPose& ego) {
    if (started_) {
        if (ego.timestamp < last_timestamp_)
            throw std::invalid_argument("TrackerSession: out-of-order timestamps");
        temporal_ = propagate(temporal_, last_pose_, ego, ego.timestamp - last_timestamp_);
    }
    TrackFrameResult res = track_frame(model_out, temporal_, bank_cfg_.num_current, cfg_, ids_);
    temporal_ = res.updated_temporal;
    last_pose_ = ego;
    last_timestamp_ = ego.timestamp;
    started_ = true;
    return res;
}

std::vector<TrackFrameResult> run_session(const std::vector<SessionFrame>& frames,
                                          const TrackerConfig& cfg, const BankConfig& bank_cfg,
                                          std::vector<Instance> initial_temporal) {
    TrackerSession session(cfg, bank_cfg, std::move(initial_temporal));
    std::vector<TrackFrameResult> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(session.step(f.model_out, f.ego));
    return out;
}

}  // namespace rqt
