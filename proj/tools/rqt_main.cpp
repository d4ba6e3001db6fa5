#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "rqt/commands.hpp"

namespace {

constexpr const char* kVersion =
    "rqt 1.0 (schemas: header/1 gt_frame/1 model_frame/1 track_frame/1 bank/1 denoise/1)";

void add_scenario_flags(CLI::App* cmd, rqt::ScenarioConfig& cfg) {
    cmd->add_option("--objects", cfg.num_objects, "Number of simulated objects");
    cmd->add_option("--frames", cfg.duration_frames, "Scenario length in frames");
    cmd->add_option("--rate", cfg.frame_rate, "Frame rate in Hz");
    cmd->add_option("--region-min", cfg.region_min, "Spawn region lower bound (m)");
    cmd->add_option("--region-max", cfg.region_max, "Spawn region upper bound (m)");
    cmd->add_option("--speed-min", cfg.speed_min, "Minimum object speed (m/s)");
    cmd->add_option("--speed-max", cfg.speed_max, "Maximum object speed (m/s)");
    cmd->add_option("--ego-speed", cfg.ego_speed, "Ego speed (m/s)");
    cmd->add_option("--ego-turn-rate", cfg.ego_turn_rate, "Ego turn rate (rad/s, arc path)");
    std::map<std::string, rqt::EgoPath> path_map{{"static", rqt::EgoPath::kStatic},
                                                 {"straight", rqt::EgoPath::kStraight},
                                                 {"arc", rqt::EgoPath::kArc}};
    cmd->add_option("--ego-path", cfg.ego_path, "Ego path shape")
        ->transform(CLI::CheckedTransformer(path_map, CLI::ignore_case));
    cmd->add_option("--noise-pos", cfg.detection_noise.position, "Detection position noise std (m)");
    cmd->add_option("--noise-dims", cfg.detection_noise.dims, "Detection size noise std (m)");
    cmd->add_option("--noise-yaw", cfg.detection_noise.yaw, "Detection yaw noise std (rad)");
    cmd->add_option("--noise-vel", cfg.detection_noise.velocity, "Detection velocity noise std");
    cmd->add_option("--dropout", cfg.dropout_prob, "Per-object per-frame dropout probability");
    cmd->add_option("--fp-rate", cfg.false_positive_rate, "Expected false positives per frame");
    cmd->add_option("--gate", cfg.gate_radius, "Pseudo-model gate radius (m)");
    cmd->add_option("--seed", cfg.rng_seed, "Root RNG seed");
}

void add_tracker_flags(CLI::App* cmd, rqt::TrackerConfig& tcfg, rqt::BankConfig& bcfg) {
    cmd->add_option("--threshold", tcfg.threshold, "Confidence threshold T");
    cmd->add_option("--decay", tcfg.decay, "Confidence decay scale S");
    cmd->add_option("--nt", bcfg.num_temporal, "Temporal instance count N_t");
    cmd->add_option("--ncur", bcfg.num_current, "Current instance count N_cur");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrent query-based 3D tracking toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // simulate
    rqt::ScenarioConfig sim_cfg;
    rqt::TrackerConfig sim_tracker;
    rqt::BankConfig sim_bank;
    std::string sim_gt_out, sim_model_out;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario");
    add_scenario_flags(simulate, sim_cfg);
    add_tracker_flags(simulate, sim_tracker, sim_bank);
    simulate->add_option("-o,--output", sim_gt_out, "Ground truth JSONL path")->required();
    simulate->add_option("--model-out", sim_model_out, "Also write pseudo-model outputs here");

    // track
    rqt::TrackCommandOptions track_opt;
    auto* track = app.add_subcommand("track", "Run the tracking pipeline");
    track->add_option("input", track_opt.input_path, "Model-output JSONL");
    track->add_option("--sim", track_opt.sim_gt_path,
                      "Ground truth JSONL to feed through the simulator pseudo-model");
    track->add_option("-o,--output", track_opt.output_path, "Track JSONL path")->required();
    track->add_option("--resume", track_opt.resume_path, "Bank checkpoint to restore");
    track->add_option("--save-bank", track_opt.save_bank_path, "Write bank checkpoint here");
    track->add_option("--model-out", track_opt.model_out_path,
                      "Dump pseudo-model outputs (sim mode)");
    add_scenario_flags(track, track_opt.pipeline.scenario);
    add_tracker_flags(track, track_opt.pipeline.tracker, track_opt.pipeline.bank);

    // eval
    std::string eval_tracks, eval_gt, eval_out;
    rqt::MatchConfig eval_cfg;
    auto* eval = app.add_subcommand("eval", "Evaluate tracks against ground truth");
    eval->add_option("tracks", eval_tracks, "Track JSONL")->required();
    eval->add_option("gt", eval_gt, "Ground truth JSONL")->required();
    eval->add_option("-o,--output", eval_out, "Metrics JSON path (stdout if omitted)");
    eval->add_option("--radius", eval_cfg.radius, "Match radius (m)");

    // denoise-gen
    std::string dn_in, dn_out;
    rqt::NoiseConfig dn_cfg;
    double dn_scale = -1.0;
    int dn_normal = 0;
    auto* denoise = app.add_subcommand("denoise-gen", "Generate denoising training samples");
    denoise->add_option("gt_boxes", dn_in, "GT boxes JSONL (one anchor per line)")->required();
    denoise->add_option("--groups", dn_cfg.num_groups, "Noise group count M");
    denoise->add_option("--temporal", dn_cfg.num_temporal_groups, "Temporal group count M'");
    denoise->add_option("--scale", dn_scale, "Uniform noise scale for all fields");
    denoise->add_option("--scale-pos", dn_cfg.scales.position, "Position noise scale (m)");
    denoise->add_option("--scale-dims", dn_cfg.scales.dims, "Size noise scale (m)");
    denoise->add_option("--scale-yaw", dn_cfg.scales.yaw, "Yaw noise scale (rad)");
    denoise->add_option("--scale-vel", dn_cfg.scales.velocity, "Velocity noise scale (m/s)");
    denoise->add_option("--seed", dn_cfg.rng_seed, "RNG seed");
    denoise->add_option("--normal", dn_normal, "Normal instance count for the attention mask");
    denoise->add_option("-o,--output", dn_out, "Output JSON path (stdout if omitted)");

    // attn-check
    uint64_t ac_seed = 0;
    std::string ac_out;
    auto* attn = app.add_subcommand("attn-check", "Run the attention invariant suite");
    attn->add_option("--seed", ac_seed, "RNG seed");
    attn->add_option("-o,--output", ac_out, "Witness report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*simulate) {
            return rqt::cmd_simulate(sim_cfg, sim_gt_out, sim_model_out, sim_tracker, sim_bank);
        }
        if (*track) {
            if (track_opt.input_path.empty() == track_opt.sim_gt_path.empty()) {
                std::cerr << "track: provide exactly one of <input> or --sim\n";
                return 1;
            }
            return rqt::cmd_track(track_opt);
        }
        if (*eval) return rqt::cmd_eval(eval_tracks, eval_gt, eval_out, eval_cfg);
        if (*denoise) {
            if (dn_scale > 0.0) dn_cfg.scales = {dn_scale, dn_scale, dn_scale, dn_scale};
            return rqt::cmd_denoise_gen(dn_in, dn_out, dn_cfg, dn_normal);
        }
        if (*attn) return rqt::cmd_attn_check(ac_seed, ac_out);
    } catch (const rqt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
