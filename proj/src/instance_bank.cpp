#include "rqt/instance_bank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rqt {

std::vector<Instance> init_current(const BankConfig& cfg,
                                   const std::vector<Anchor3D>& anchor_seed) {
    if (!cfg.valid()) throw std::invalid_argument("init_current: invalid bank config");
    if (static_cast<int>(anchor_seed.size()) != cfg.num_current)
        throw std::invalid_argument("init_current: anchor seed size != num_current");

    std::vector<Instance> out;
    out.reserve(anchor_seed.size());
    for (const auto& a : anchor_seed) out.push_back(Instance{0.0, a, std::nullopt});
    return out;
}

std::vector<Instance> propagate(const std::vector<Instance>& temporal, const EgoPose& from,
                                const EgoPose& to, double dt) {
    std::vector<Instance> out;
    out.reserve(temporal.size());
    for (const auto& inst : temporal) {
        Instance p = inst;
        p.anchor = transform_anchor(inst.anchor, from, to, dt);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Instance> select_topk(const std::vector<Instance>& scored, int k) {
    if (k < 0 || k > static_cast<int>(scored.size()))
        throw std::invalid_argument("select_topk: k out of range");

    std::vector<int> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scored[a].confidence > scored[b].confidence;
    });

    std::vector<Instance> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(scored[order[i]]);
    return out;
}

}  // namespace rqt
