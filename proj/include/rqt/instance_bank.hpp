#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rqt/geometry.hpp"

namespace rqt {

// (confidence, anchor, optional track id) triple flowing through the pipeline.
struct Instance {
    double confidence = 0.0;
    Anchor3D anchor;
    std::optional<int64_t> id;
};

struct BankConfig {
    int num_current = 900;   // N_cur
    int num_temporal = 600;  // N_t

    bool valid() const { return num_current > 0 && num_temporal > 0; }
};

// Id-less, zero-confidence instances over caller-supplied anchors.
std::vector<Instance> init_current(const BankConfig& cfg, const std::vector<Anchor3D>& anchor_seed);

// Ego-pose + velocity compensation of every anchor; confidence and id ride
// along untouched.
std::vector<Instance> propagate(const std::vector<Instance>& temporal, const EgoPose& from,
                                const EgoPose& to, double dt);

// k highest-confidence instances; ties break toward the lower input index.
std::vector<Instance> select_topk(const std::vector<Instance>& scored, int k);

}  // namespace rqt
