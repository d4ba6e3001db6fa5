#pragma once

#include <cstdint>
#include <vector>

#include "rqt/attention_mask.hpp"
#include "rqt/geometry.hpp"

namespace rqt {

// One uniform scale per anchor field; units follow the field (m, m, rad, m/s).
struct NoiseScales {
    double position = 0.1;
    double dims = 0.1;
    double yaw = 0.1;
    double velocity = 0.1;

    bool valid() const { return position > 0 && dims > 0 && yaw > 0 && velocity > 0; }
};

struct NoiseConfig {
    int num_groups = 5;           // M
    int num_temporal_groups = 3;  // M', temporal subset
    NoiseScales scales;
    uint64_t rng_seed = 0;

    bool valid() const {
        return num_groups > 0 && num_temporal_groups >= 0 &&
               num_temporal_groups <= num_groups && scales.valid();
    }
};

enum class NoiseBand { kInner, kOuter };

struct NoisySample {
    Anchor3D anchor;
    int group = 0;       // [0, M)
    NoiseBand band = NoiseBand::kInner;
    int gt_index = 0;    // ground truth this sample was derived from
    int positive_gt = -1;  // >= 0 after assignment if this sample is positive
};

struct NoiseGroupSet {
    std::vector<NoisySample> samples;  // size = num_gt * num_groups * 2
    int num_gt = 0;
    int num_groups = 0;
};

// Perturbs every ground truth anchor M times per band. Inner-band offsets are
// uniform in (-x, x) per component; outer-band offsets have magnitude in
// [x, 2x) with an independent random sign per component.
NoiseGroupSet generate_noise(const std::vector<Anchor3D>& gt, const NoiseConfig& cfg);

// Per group, min-cost one-to-one matching of ground truths to that group's 2N
// samples by center distance. The matched sample becomes the positive for its
// ground truth; all other samples in the group stay negative. The band label
// never forces the sign.
NoiseGroupSet assign_noise_groups(NoiseGroupSet gs, const std::vector<Anchor3D>& gt);

// M' distinct group indices, uniform without replacement.
std::vector<int> select_temporal_groups(const NoiseGroupSet& gs, const NoiseConfig& cfg);

// Anchors of the selected groups carried to the next frame by the same
// ego-pose + velocity compensation as regular instances.
std::vector<NoisySample> propagate_noise_groups(const NoiseGroupSet& gs,
                                                const std::vector<int>& selected,
                                                const EgoPose& from, const EgoPose& to,
                                                double dt);

// Self-attention mask over [normal instances | noise samples]: normal talks to
// normal, each noise group only to itself.
AttentionMask build_attention_mask(int num_normal, const NoiseGroupSet& gs);

}  // namespace rqt
