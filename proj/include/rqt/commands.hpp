#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rqt/metrics.hpp"
#include "rqt/serialization.hpp"
#include "rqt/simulator.hpp"
#include "rqt/tracker.hpp"

// Subcommand bodies, kept out of main() so tests can drive them directly.

namespace rqt {

// Thrown on unreadable/unwritable paths and malformed input lines; maps to
// exit code 2 at the CLI boundary.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineOptions {
    ScenarioConfig scenario;
    TrackerConfig tracker;
    BankConfig bank;
};

struct PipelineOutput {
    std::vector<GtFrame> gt;
    std::vector<std::vector<Detection>> model_frames;  // one per frame, size N_t + N_cur
    std::vector<TrackFrameResult> track_frames;
    BankCheckpoint final_bank;
};

// Simulator-backed loop: pseudo-model + tracker over a ground truth log.
PipelineOutput run_sim_pipeline(const GroundTruthLog& gt, const PipelineOptions& opt,
                                const std::optional<BankCheckpoint>& resume = std::nullopt);

GroundTruthLog read_gt_log(const std::string& path);
void write_gt_log(const std::string& path, const GroundTruthLog& log, const ScenarioConfig& cfg);

std::vector<TrackedFrame> read_track_log(const std::string& path);

int cmd_simulate(const ScenarioConfig& cfg, const std::string& gt_path,
                 const std::string& model_out_path, const TrackerConfig& tracker_cfg,
                 const BankConfig& bank_cfg);

struct TrackCommandOptions {
    std::string input_path;       // model-output JSONL; empty when sim_gt_path is set
    std::string sim_gt_path;      // GT JSONL to feed through the pseudo-model
    std::string output_path;
    std::string resume_path;      // optional bank checkpoint to restore
    std::string save_bank_path;   // optional checkpoint to write at end
    std::string model_out_path;   // optional dump of pseudo-model outputs (sim mode)
    PipelineOptions pipeline;
};

int cmd_track(const TrackCommandOptions& opt);

int cmd_eval(const std::string& tracks_path, const std::string& gt_path,
             const std::string& output_path, const MatchConfig& cfg);

int cmd_denoise_gen(const std::string& gt_boxes_path, const std::string& output_path,
                    const NoiseConfig& cfg, int num_normal);

int cmd_attn_check(uint64_t seed, const std::string& output_path);

}  // namespace rqt
