#include "rqt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rqt {

std::vector<double> default_recall_grid() {
    std::vector<double> grid(40);
    for (int i = 0; i < 40; ++i) grid[i] = 0.05 + i * (0.95 / 39.0);
    return grid;
}

MatchConfig::MatchConfig() : recall_thresholds(default_recall_grid()) {}

bool MatchConfig::valid() const {
    if (radius <= 0.0 || recall_thresholds.empty()) return false;
    for (size_t i = 0; i < recall_thresholds.size(); ++i) {
        if (recall_thresholds[i] <= 0.0 || recall_thresholds[i] > 1.0) return false;
        if (i > 0 && recall_thresholds[i] < recall_thresholds[i - 1]) return false;
    }
    return true;
}

FrameMatching match_frame(const std::vector<Instance>& tracks,
                          const std::vector<GtObject>& gt, const MatchConfig& cfg) {
    struct Pair {
        double dist;
        int ti, gi;
    };
    std::vector<Pair> pairs;
    for (int ti = 0; ti < static_cast<int>(tracks.size()); ++ti) {
        for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi) {
            double d = center_distance(tracks[ti].anchor, gt[gi].anchor);
            if (d <= cfg.radius) pairs.push_back({d, ti, gi});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return a.dist < b.dist;
    });

    std::vector<char> track_used(tracks.size(), false), gt_used(gt.size(), false);
    FrameMatching fm;
    for (const auto& p : pairs) {
        if (track_used[p.ti] || gt_used[p.gi]) continue;
        track_used[p.ti] = true;
        gt_used[p.gi] = true;
        fm.matches.emplace_back(tracks[p.ti].id.value_or(-1), gt[p.gi].id);
        fm.match_distances.push_back(p.dist);
    }
    fm.fp = static_cast<int>(std::count(track_used.begin(), track_used.end(), false));
    fm.fn = static_cast<int>(std::count(gt_used.begin(), gt_used.end(), false));
    return fm;
}

int count_id_switches(const std::vector<FrameMatching>& matchings) {
    std::map<int64_t, int64_t> last_track_of_gt;
    int switches = 0;
    for (const auto& fm : matchings) {
        for (const auto& [track_id, gt_id] : fm.matches) {
            auto it = last_track_of_gt.find(gt_id);
            if (it != last_track_of_gt.end() && it->second != track_id) ++switches;
            last_track_of_gt[gt_id] = track_id;
        }
    }
    return switches;
}

MotaMotp mota_motp(const std::vector<FrameMatching>& matchings, int gt_total) {
    if (gt_total <= 0) throw std::invalid_argument("mota_motp: gt_total must be > 0");
    int fp = 0, fn = 0;
    double dist_sum = 0.0;
    size_t matched = 0;
    for (const auto& fm : matchings) {
        fp += fm.fp;
        fn += fm.fn;
        matched += fm.match_distances.size();
        dist_sum = std::accumulate(fm.match_distances.begin(), fm.match_distances.end(), dist_sum);
    }
    const int ids = count_id_switches(matchings);
    MotaMotp out;
    out.mota = 1.0 - static_cast<double>(fp + fn + ids) / gt_total;
    out.motp = matched > 0 ? dist_sum / static_cast<double>(matched) : 0.0;
    return out;
}

namespace {

struct SweepStats {
    int tp = 0, fp = 0, fn = 0, ids = 0;
    double dist_sum = 0.0;
};

SweepStats stats_at_cutoff(const std::vector<TrackedFrame>& track_log,
                           const GroundTruthLog& gt_log, const MatchConfig& cfg, double cutoff) {
    std::vector<FrameMatching> matchings;
    matchings.reserve(track_log.size());
    SweepStats st;
    for (size_t f = 0; f < track_log.size(); ++f) {
        std::vector<Instance> kept;
        for (const auto& t : track_log[f].tracks)
            if (t.confidence >= cutoff) kept.push_back(t);
        FrameMatching fm = match_frame(kept, gt_log[f].objects, cfg);
        st.tp += static_cast<int>(fm.matches.size());
        st.fp += fm.fp;
        st.fn += fm.fn;
        st.dist_sum =
            std::accumulate(fm.match_distances.begin(), fm.match_distances.end(), st.dist_sum);
        matchings.push_back(std::move(fm));
    }
    st.ids = count_id_switches(matchings);
    return st;
}

double motar_at(const SweepStats& st, double r, int gt_total) {
    const double num = st.ids + st.fp + st.fn - (1.0 - r) * gt_total;
    const double v = 1.0 - num / (r * gt_total);
    return std::min(std::max(v, 0.0), 1.0);
}

}  // namespace

TrackingMetrics evaluate_tracking(const std::vector<TrackedFrame>& track_log,
                                  const GroundTruthLog& gt_log, const MatchConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("evaluate_tracking: invalid match config");
    if (track_log.size() != gt_log.size())
        throw std::invalid_argument("evaluate_tracking: track/gt frame count mismatch");
    int gt_total = 0;
    for (const auto& f : gt_log) gt_total += static_cast<int>(f.objects.size());
    if (gt_total == 0) throw std::invalid_argument("evaluate_tracking: empty ground truth");

    TrackingMetrics out;

    // Scalar block: every emitted track counts.
    const SweepStats all = stats_at_cutoff(track_log, gt_log, cfg,
                                           -std::numeric_limits<double>::infinity());
    out.ids = all.ids;
    out.recall = static_cast<double>(all.tp) / gt_total;
    out.mota = 1.0 - static_cast<double>(all.fp + all.fn + all.ids) / gt_total;
    out.motp = all.tp > 0 ? all.dist_sum / all.tp : 0.0;
    out.motar = out.recall > 0.0 ? motar_at(all, out.recall, gt_total) : 0.0;

    // Recall sweep over distinct confidence cutoffs, highest first.
    std::vector<double> cutoffs;
    for (const auto& f : track_log)
        for (const auto& t : f.tracks) cutoffs.push_back(t.confidence);
    std::sort(cutoffs.begin(), cutoffs.end(), std::greater<>());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());

    std::vector<SweepStats> per_cutoff;
    per_cutoff.reserve(cutoffs.size());
    for (double c : cutoffs) per_cutoff.push_back(stats_at_cutoff(track_log, gt_log, cfg, c));

    double amota_sum = 0.0, amotp_sum = 0.0;
    int achieved = 0;
    for (double r : cfg.recall_thresholds) {
        int chosen = -1;
        for (size_t ci = 0; ci < cutoffs.size(); ++ci) {
            if (static_cast<double>(per_cutoff[ci].tp) / gt_total >= r) {
                chosen = static_cast<int>(ci);
                break;
            }
        }
        if (chosen < 0) continue;  // unachievable recall contributes 0
        const SweepStats& st = per_cutoff[chosen];
        amota_sum += motar_at(st, r, gt_total);
        amotp_sum += st.tp > 0 ? st.dist_sum / st.tp : 0.0;
        ++achieved;
    }
    out.amota = amota_sum / static_cast<double>(cfg.recall_thresholds.size());
    out.amotp = achieved > 0 ? amotp_sum / achieved : 0.0;
    return out;
}

PrCurve detection_pr(const std::vector<ScoredDetection>& dets, const GroundTruthLog& gt_log,
                     double radius) {
    int gt_total = 0;
    for (const auto& f : gt_log) gt_total += static_cast<int>(f.objects.size());

    std::vector<int> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return dets[a].score > dets[b].score;
    });

    // gt_used[frame][object index]
    std::vector<std::vector<char>> gt_used;
    for (const auto& f : gt_log) gt_used.emplace_back(f.objects.size(), false);

    PrCurve curve;
    int tp = 0, fp = 0;
    double ap = 0.0, prev_r = 0.0, prev_p = 1.0;
    for (int idx : order) {
        const auto& det = dets[idx];
        int best = -1;
        double best_d = radius;
        if (det.frame >= 0 && det.frame < static_cast<int>(gt_log.size())) {
            const auto& objs = gt_log[det.frame].objects;
            for (int gi = 0; gi < static_cast<int>(objs.size()); ++gi) {
                if (gt_used[det.frame][gi]) continue;
                double d = center_distance(det.anchor, objs[gi].anchor);
                if (d <= best_d) {
                    best_d = d;
                    best = gi;
                }
            }
        }
        if (best >= 0) {
            gt_used[det.frame][best] = true;
            ++tp;
        } else {
            ++fp;
        }
        const double p = static_cast<double>(tp) / (tp + fp);
        const double r = gt_total > 0 ? static_cast<double>(tp) / gt_total : 0.0;
        curve.precision.push_back(p);
        curve.recall.push_back(r);
        ap += (r - prev_r) * 0.5 * (p + prev_p);
        prev_r = r;
        prev_p = p;
    }
    curve.ap = ap;
    return curve;
}

}  // namespace rqt
