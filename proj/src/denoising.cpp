#include "rqt/denoising.hpp"

#include <algorithm>
#include <stdexcept>

#include "rqt/hungarian.hpp"
#include "rqt/rng.hpp"

namespace rqt {
namespace {

// Inner band: uniform in (-x, x).
double inner_offset(Rng& rng, double x) {
    return (2.0 * rng.open01() - 1.0) * x;
}

// Outer band: magnitude in [x, 2x), independent sign.
double outer_offset(Rng& rng, double x) {
    double mag = x * (1.0 + rng.uniform01());
    return rng.coin() ? mag : -mag;
}

Anchor3D perturb(const Anchor3D& a, const NoiseScales& s, NoiseBand band, Rng& rng) {
    auto draw = [&](double scale) {
        return band == NoiseBand::kInner ? inner_offset(rng, scale) : outer_offset(rng, scale);
    };
    Anchor3D out = a;
    for (int c = 0; c < 3; ++c) out.center[c] += draw(s.position);
    for (int c = 0; c < 3; ++c) out.dims[c] += draw(s.dims);
    out.yaw = wrap_angle(out.yaw + draw(s.yaw));
    for (int c = 0; c < 3; ++c) out.velocity[c] += draw(s.velocity);
    return out;
}

}  // namespace

NoiseGroupSet generate_noise(const std::vector<Anchor3D>& gt, const NoiseConfig& cfg) {
    if (gt.empty()) throw std::invalid_argument("generate_noise: no ground truth");
    if (!cfg.valid()) throw std::invalid_argument("generate_noise: invalid config");

    Rng rng(derive_seed(cfg.rng_seed, "denoise"));
    const int n = static_cast<int>(gt.size());

    NoiseGroupSet gs;
    gs.num_gt = n;
    gs.num_groups = cfg.num_groups;
    gs.samples.reserve(static_cast<size_t>(n) * cfg.num_groups * 2);
    for (int g = 0; g < cfg.num_groups; ++g) {
        for (NoiseBand band : {NoiseBand::kInner, NoiseBand::kOuter}) {
            for (int i = 0; i < n; ++i) {
                NoisySample s;
                s.anchor = perturb(gt[i], cfg.scales, band, rng);
                s.group = g;
                s.band = band;
                s.gt_index = i;
                gs.samples.push_back(std::move(s));
            }
        }
    }
    return gs;
}

NoiseGroupSet assign_noise_groups(NoiseGroupSet gs, const std::vector<Anchor3D>& gt) {
    const int n = static_cast<int>(gt.size());
    if (n != gs.num_gt) throw std::invalid_argument("assign_noise_groups: gt size mismatch");

    for (auto& s : gs.samples) s.positive_gt = -1;

    for (int g = 0; g < gs.num_groups; ++g) {
        std::vector<int> members;  // indices into gs.samples
        for (int idx = 0; idx < static_cast<int>(gs.samples.size()); ++idx)
            if (gs.samples[idx].group == g) members.push_back(idx);
        if (members.empty()) throw std::invalid_argument("assign_noise_groups: empty group");

        // Rows = ground truths, cols = group samples. Rectangular, n <= 2n.
        std::vector<std::vector<double>> cost(n, std::vector<double>(members.size()));
        for (int i = 0; i < n; ++i)
            for (size_t j = 0; j < members.size(); ++j)
                cost[i][j] = center_distance(gt[i], gs.samples[members[j]].anchor);

        const std::vector<int> col_of_row = hungarian_assign(cost);
        for (int i = 0; i < n; ++i) gs.samples[members[col_of_row[i]]].positive_gt = i;
    }
    return gs;
}

std::vector<int> select_temporal_groups(const NoiseGroupSet& gs, const NoiseConfig& cfg) {
    if (cfg.num_temporal_groups > gs.num_groups)
        throw std::invalid_argument("select_temporal_groups: M' > M");

    Rng rng(derive_seed(cfg.rng_seed, "temporal-groups"));
    std::vector<int> pool(gs.num_groups);
    for (int g = 0; g < gs.num_groups; ++g) pool[g] = g;
    // Partial Fisher-Yates.
    for (int i = 0; i < cfg.num_temporal_groups; ++i) {
        int j = rng.uniform_int(i, gs.num_groups - 1);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(cfg.num_temporal_groups);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<NoisySample> propagate_noise_groups(const NoiseGroupSet& gs,
                                                const std::vector<int>& selected,
                                                const EgoPose& from, const EgoPose& to,
                                                double dt) {
    std::vector<NoisySample> out;
    for (const auto& s : gs.samples) {
        if (std::find(selected.begin(), selected.end(), s.group) == selected.end()) continue;
        NoisySample p = s;
        p.anchor = transform_anchor(s.anchor, from, to, dt);
        out.push_back(std::move(p));
    }
    return out;
}

AttentionMask build_attention_mask(int num_normal, const NoiseGroupSet& gs) {
    if (num_normal < 0) throw std::invalid_argument("build_attention_mask: num_normal < 0");
    const int total = num_normal + static_cast<int>(gs.samples.size());

    // Group id per slot; -1 = normal instance.
    std::vector<int> slot_group(total, -1);
    for (size_t i = 0; i < gs.samples.size(); ++i)
        slot_group[num_normal + i] = gs.samples[i].group;

    AttentionMask mask(total, total, false);
    for (int q = 0; q < total; ++q)
        for (int k = 0; k < total; ++k)
            if (slot_group[q] == slot_group[k]) mask.set(q, k, true);
    return mask;
}

}  // namespace rqt
