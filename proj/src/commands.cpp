#include "rqt/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "rqt/attention.hpp"

namespace rqt {
namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

json parse_line(const std::string& line, const std::string& path, int lineno) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw IoError(path + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
}

void require_schema(const json& j, const char* schema, const std::string& path, int lineno) {
    if (j.value("schema", "") != schema)
        throw IoError(path + ":" + std::to_string(lineno) + ": expected schema '" +
                      schema + "'");
}

json header_record(const char* kind, json config) {
    return json{{"schema", kHeaderSchema}, {"kind", kind}, {"config", std::move(config)}};
}

std::vector<Instance> grid_temporal(const PipelineOptions& opt) {
    auto anchors = make_grid_anchors(opt.bank.num_temporal, opt.scenario.region_min,
                                     opt.scenario.region_max);
    std::vector<Instance> out;
    out.reserve(anchors.size());
    for (auto& a : anchors) out.push_back(Instance{0.0, a, std::nullopt});
    return out;
}

}  // namespace

PipelineOutput run_sim_pipeline(const GroundTruthLog& gt, const PipelineOptions& opt,
                                const std::optional<BankCheckpoint>& resume) {
    const auto current = init_current(
        opt.bank, make_grid_anchors(opt.bank.num_current, opt.scenario.region_min,
                                    opt.scenario.region_max));

    std::vector<Instance> temporal = resume ? resume->temporal : grid_temporal(opt);
    if (static_cast<int>(temporal.size()) != opt.bank.num_temporal)
        throw std::invalid_argument("run_sim_pipeline: resume bank size != N_t");
    IdGenerator ids(resume ? resume->next_id : 0);

    Rng rng(derive_seed(opt.scenario.rng_seed, "pseudo-model"));

    PipelineOutput out;
    out.gt = gt;
    bool started = resume.has_value();
    EgoPose last_pose = resume ? resume->last_pose : EgoPose{};
    double last_ts = resume ? resume->last_timestamp : 0.0;

    for (const auto& frame : gt) {
        if (started) {
            if (frame.timestamp < last_ts)
                throw std::invalid_argument("run_sim_pipeline: out-of-order timestamps");
            temporal = propagate(temporal, last_pose, frame.ego, frame.timestamp - last_ts);
        }
        auto dets = pseudo_model(frame, temporal, current, opt.scenario, rng);
        auto res = track_frame(dets, temporal, opt.bank.num_current, opt.tracker, ids);
        temporal = res.updated_temporal;
        last_pose = frame.ego;
        last_ts = frame.timestamp;
        started = true;
        out.model_frames.push_back(std::move(dets));
        out.track_frames.push_back(std::move(res));
    }

    out.final_bank = BankCheckpoint{temporal, ids.peek(), last_ts, last_pose};
    return out;
}

GroundTruthLog read_gt_log(const std::string& path) {
    auto in = open_in(path);
    GroundTruthLog log;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        if (lineno == 1 && j.value("schema", "") == kHeaderSchema) continue;
        require_schema(j, kGtFrameSchema, path, lineno);
        log.push_back(j.get<GtFrame>());
    }
    return log;
}

void write_gt_log(const std::string& path, const GroundTruthLog& log,
                  const ScenarioConfig& cfg) {
    auto out = open_out(path);
    out << header_record("gt", json(cfg)).dump() << "\n";
    for (const auto& f : log) out << json(f).dump() << "\n";
}

std::vector<TrackedFrame> read_track_log(const std::string& path) {
    auto in = open_in(path);
    std::vector<TrackedFrame> log;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        if (lineno == 1 && j.value("schema", "") == kHeaderSchema) continue;
        require_schema(j, kTrackFrameSchema, path, lineno);
        TrackedFrame f;
        f.frame = j.at("frame");
        f.tracks = j.at("results").get<std::vector<Instance>>();
        log.push_back(std::move(f));
    }
    return log;
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& gt_path,
                 const std::string& model_out_path, const TrackerConfig& tracker_cfg,
                 const BankConfig& bank_cfg) {
    const GroundTruthLog log = generate_scenario(cfg);
    write_gt_log(gt_path, log, cfg);

    if (!model_out_path.empty()) {
        PipelineOptions opt{cfg, tracker_cfg, bank_cfg};
        PipelineOutput pipe = run_sim_pipeline(log, opt);
        auto out = open_out(model_out_path);
        out << header_record("model",
                             json{{"scenario", cfg}, {"tracker", tracker_cfg}, {"bank", bank_cfg}})
                   .dump()
            << "\n";
        for (size_t f = 0; f < log.size(); ++f) {
            json j{{"schema", kModelFrameSchema},
                   {"frame", log[f].frame},
                   {"timestamp", log[f].timestamp},
                   {"ego", log[f].ego},
                   {"num_temporal", bank_cfg.num_temporal},
                   {"detections", pipe.model_frames[f]}};
            out << j.dump() << "\n";
        }
    }
    return 0;
}

int cmd_track(const TrackCommandOptions& opt) {
    std::optional<BankCheckpoint> resume;
    if (!opt.resume_path.empty()) {
        auto in = open_in(opt.resume_path);
        std::stringstream buf;
        buf << in.rdbuf();
        json j = parse_line(buf.str(), opt.resume_path, 1);
        require_schema(j, kBankSchema, opt.resume_path, 1);
        resume = j.get<BankCheckpoint>();
    }

    auto out = open_out(opt.output_path);
    out << header_record("tracks", json{{"tracker", opt.pipeline.tracker},
                                        {"bank", opt.pipeline.bank},
                                        {"scenario", opt.pipeline.scenario}})
               .dump()
        << "\n";

    std::vector<TrackFrameResult> results;
    std::vector<std::pair<int, double>> frame_meta;  // (frame index, timestamp)
    BankCheckpoint final_bank;

    if (!opt.sim_gt_path.empty()) {
        const GroundTruthLog gt = read_gt_log(opt.sim_gt_path);
        PipelineOutput pipe = run_sim_pipeline(gt, opt.pipeline, resume);
        results = std::move(pipe.track_frames);
        for (const auto& f : gt) frame_meta.emplace_back(f.frame, f.timestamp);
        final_bank = pipe.final_bank;

        if (!opt.model_out_path.empty()) {
            auto mout = open_out(opt.model_out_path);
            mout << header_record("model", json{{"scenario", opt.pipeline.scenario},
                                                {"tracker", opt.pipeline.tracker},
                                                {"bank", opt.pipeline.bank}})
                        .dump()
                 << "\n";
            for (size_t f = 0; f < gt.size(); ++f) {
                json j{{"schema", kModelFrameSchema},
                       {"frame", gt[f].frame},
                       {"timestamp", gt[f].timestamp},
                       {"ego", gt[f].ego},
                       {"num_temporal", opt.pipeline.bank.num_temporal},
                       {"detections", pipe.model_frames[f]}};
                mout << j.dump() << "\n";
            }
        }
    } else {
        auto in = open_in(opt.input_path);
        std::vector<Instance> initial =
            resume ? resume->temporal
                   : [&] {
                         auto anchors = make_grid_anchors(opt.pipeline.bank.num_temporal,
                                                          opt.pipeline.scenario.region_min,
                                                          opt.pipeline.scenario.region_max);
                         std::vector<Instance> t;
                         for (auto& a : anchors) t.push_back(Instance{0.0, a, std::nullopt});
                         return t;
                     }();
        TrackerSession session =
            resume ? TrackerSession(opt.pipeline.tracker, opt.pipeline.bank, std::move(initial),
                                    resume->next_id, resume->last_timestamp, resume->last_pose)
                   : TrackerSession(opt.pipeline.tracker, opt.pipeline.bank, std::move(initial));

        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            json j = parse_line(line, opt.input_path, lineno);
            if (lineno == 1 && j.value("schema", "") == kHeaderSchema) continue;
            require_schema(j, kModelFrameSchema, opt.input_path, lineno);
            const int n_t = j.at("num_temporal");
            if (n_t != opt.pipeline.bank.num_temporal)
                throw IoError(opt.input_path + ":" + std::to_string(lineno) +
                              ": num_temporal mismatch with bank config");
            auto dets = j.at("detections").get<std::vector<Detection>>();
            EgoPose ego = j.at("ego").get<EgoPose>();
            results.push_back(session.step(dets, ego));
            frame_meta.emplace_back(j.at("frame").get<int>(), j.at("timestamp").get<double>());
        }
        final_bank = BankCheckpoint{session.temporal(), session.next_id(),
                                    session.last_timestamp(), session.last_pose()};
    }

    for (size_t f = 0; f < results.size(); ++f) {
        json j{{"schema", kTrackFrameSchema},
               {"frame", frame_meta[f].first},
               {"timestamp", frame_meta[f].second},
               {"results", results[f].results}};
        out << j.dump() << "\n";
    }

    if (!opt.save_bank_path.empty()) {
        auto bout = open_out(opt.save_bank_path);
        bout << json(final_bank).dump() << "\n";
    }
    return 0;
}

int cmd_eval(const std::string& tracks_path, const std::string& gt_path,
             const std::string& output_path, const MatchConfig& cfg) {
    const auto tracks = read_track_log(tracks_path);
    const auto gt = read_gt_log(gt_path);
    const TrackingMetrics m = evaluate_tracking(tracks, gt, cfg);

    json j = m;
    j["config"] = json{{"radius", cfg.radius}, {"recall_thresholds", cfg.recall_thresholds}};
    if (output_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        auto out = open_out(output_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_denoise_gen(const std::string& gt_boxes_path, const std::string& output_path,
                    const NoiseConfig& cfg, int num_normal) {
    auto in = open_in(gt_boxes_path);
    std::vector<Anchor3D> gt;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, gt_boxes_path, lineno);
        if (lineno == 1 && j.value("schema", "") == kHeaderSchema) continue;
        try {
            gt.push_back(j.get<Anchor3D>());
        } catch (const json::exception& e) {
            throw IoError(gt_boxes_path + ":" + std::to_string(lineno) + ": bad anchor: " +
                          e.what());
        }
    }

    NoiseGroupSet gs = assign_noise_groups(generate_noise(gt, cfg), gt);
    const auto temporal_groups = select_temporal_groups(gs, cfg);
    const AttentionMask mask = build_attention_mask(num_normal, gs);

    json j{{"schema", "denoise/1"},
           {"config", cfg},
           {"num_normal", num_normal},
           {"noise", gs},
           {"temporal_groups", temporal_groups},
           {"mask", mask}};
    if (output_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        auto out = open_out(output_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_attn_check(uint64_t seed, const std::string& output_path) {
    const int n = 8, d = 16;
    Rng rng(derive_seed(seed, "attn-check"));
    std::vector<Vec> f, e;
    for (int i = 0; i < n; ++i) {
        Vec fi(d), ei(d);
        for (int c = 0; c < d; ++c) fi[c] = rng.uniform(-1.0, 1.0);
        for (int c = 0; c < d; ++c) ei[c] = rng.uniform(-1.0, 1.0);
        f.push_back(fi);
        e.push_back(ei);
    }
    MhaParams narrow = MhaParams::seeded(4, 8, d, d, d, seed);
    MhaParams wide = MhaParams::seeded(4, 8, 2 * d, d, d, seed + 1);

    // Block-diagonal mask with an isolated pair, exercising masked softmax.
    AttentionMask mask(n, n, false);
    for (int q = 0; q < n; ++q)
        for (int k = 0; k < n; ++k)
            if ((q < n / 2) == (k < n / 2)) mask.set(q, k, true);

    bool all_ok = true;
    auto report = [&](const char* name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        all_ok = all_ok && ok;
    };

    // Softmax normalization and mask soundness.
    {
        MhaResult res = attn_additive(f, e, narrow, &mask);
        bool rows_ok = true, mask_ok = true;
        for (const auto& w : res.head_weights) {
            for (int q = 0; q < n; ++q) {
                double sum = 0.0;
                for (int k = 0; k < n; ++k) {
                    sum += w(q, k);
                    if (!mask.at(q, k) && w(q, k) != 0.0) mask_ok = false;
                }
                if (std::abs(sum - 1.0) > 1e-6) rows_ok = false;
            }
        }
        report("softmax rows sum to 1 (tol 1e-6)", rows_ok);
        report("masked weights exactly zero", mask_ok);
    }

    // Permutation equivariance: reverse the instances.
    {
        std::vector<Vec> fr(f.rbegin(), f.rend()), er(e.rbegin(), e.rend());
        MhaResult base = attn_additive(f, e, narrow);
        MhaResult perm = attn_additive(fr, er, narrow);
        bool ok = true;
        for (int i = 0; i < n; ++i)
            if ((base.outputs[i] - perm.outputs[n - 1 - i]).cwiseAbs().maxCoeff() > 1e-15)
                ok = false;
        report("permutation equivariance (tol 1e-15)", ok);
    }

    // Pre-projection similarity decomposition.
    {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j2 = 0; j2 < n; ++j2) {
                Vec a(2 * d), b(2 * d);
                a << f[i], e[i];
                b << f[j2], e[j2];
                double lhs = a.dot(b);
                double rhs = f[i].dot(f[j2]) + e[i].dot(e[j2]);
                if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
                    ok = false;
                    break;
                }
            }
        report("concat dot product decomposes (tol 1e-12)", ok);
    }

    const DivergenceWitness witness = find_divergence_witness(seed);
    report("additive vs decoupled argmax divergence witness", witness.found);

    if (!output_path.empty() && witness.found) {
        json wj{{"schema", "attn-check/1"},
                {"witness_query", witness.query},
                {"additive_weights", json::array()},
                {"decoupled_weights", json::array()}};
        for (int q = 0; q < witness.additive_weights.rows(); ++q) {
            json ra = json::array(), rd = json::array();
            for (int k = 0; k < witness.additive_weights.cols(); ++k) {
                ra.push_back(witness.additive_weights(q, k));
                rd.push_back(witness.decoupled_weights(q, k));
            }
            wj["additive_weights"].push_back(std::move(ra));
            wj["decoupled_weights"].push_back(std::move(rd));
        }
        auto out = open_out(output_path);
        out << wj.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
}

}  // namespace rqt
