#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include "rqt/denoising.hpp"
#include "rqt/hungarian.hpp"
#include "rqt/rng.hpp"

using namespace rqt;

namespace {

std::vector<Anchor3D> random_gt(int n, Rng& rng) {
    std::vector<Anchor3D> gt(n);
    for (auto& a : gt) {
        a.center = Eigen::Vector3d(rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(-2, 2));
        a.dims = Eigen::Vector3d(rng.uniform(1, 3), rng.uniform(2, 6), rng.uniform(1, 2));
        a.yaw = wrap_angle(rng.uniform(-kPi, kPi));
        a.velocity = Eigen::Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5), 0);
    }
    return gt;
}

// Componentwise offsets between a noisy sample and its source ground truth,
// paired with the scale that applied to each component.
std::vector<std::pair<double, double>> offsets(const Anchor3D& noisy, const Anchor3D& gt,
                                               const NoiseScales& s) {
    std::vector<std::pair<double, double>> out;
    for (int c = 0; c < 3; ++c) out.emplace_back(noisy.center[c] - gt.center[c], s.position);
    for (int c = 0; c < 3; ++c) out.emplace_back(noisy.dims[c] - gt.dims[c], s.dims);
    out.emplace_back(wrap_angle(noisy.yaw - gt.yaw), s.yaw);
    for (int c = 0; c < 3; ++c) out.emplace_back(noisy.velocity[c] - gt.velocity[c], s.velocity);
    return out;
}

// Exhaustive minimum-cost injective map gt -> samples.
double brute_force_min_cost(const std::vector<Anchor3D>& gt,
                            const std::vector<const NoisySample*>& samples) {
    const int n = static_cast<int>(gt.size());
    std::vector<char> used(samples.size(), false);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(int, double)> rec = [&](int i, double acc) {
        if (acc >= best) return;
        if (i == n) {
            best = acc;
            return;
        }
        for (size_t j = 0; j < samples.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            rec(i + 1, acc + center_distance(gt[i], samples[j]->anchor));
            used[j] = false;
        }
    };
    rec(0, 0.0);
    return best;
}

}  // namespace

TEST_CASE("generate_noise sizes and errors") {
    Rng rng(1);
    NoiseConfig cfg;
    cfg.num_groups = 1;
    cfg.num_temporal_groups = 1;
    auto gt1 = random_gt(1, rng);
    auto gs = generate_noise(gt1, cfg);
    REQUIRE(gs.samples.size() == 2);
    CHECK(gs.samples[0].band == NoiseBand::kInner);
    CHECK(gs.samples[1].band == NoiseBand::kOuter);

    cfg.num_groups = 5;
    auto gt4 = random_gt(4, rng);
    CHECK(generate_noise(gt4, cfg).samples.size() == 40);

    CHECK_THROWS_AS(generate_noise({}, cfg), std::invalid_argument);
    NoiseConfig bad = cfg;
    bad.num_temporal_groups = 9;
    CHECK_THROWS_AS(generate_noise(gt4, bad), std::invalid_argument);
}

TEST_CASE("generate_noise is deterministic per seed") {
    Rng rng(2);
    auto gt = random_gt(3, rng);
    NoiseConfig cfg;
    cfg.rng_seed = 42;
    auto a = generate_noise(gt, cfg);
    auto b = generate_noise(gt, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK((a.samples[i].anchor.center - b.samples[i].anchor.center).cwiseAbs().maxCoeff() ==
              0.0);
        CHECK((a.samples[i].anchor.dims - b.samples[i].anchor.dims).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.samples[i].anchor.yaw == b.samples[i].anchor.yaw);
        CHECK((a.samples[i].anchor.velocity - b.samples[i].anchor.velocity)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("band containment over many seeds") {
    Rng rng(3);
    for (uint64_t seed = 0; seed < 100; ++seed) {
        auto gt = random_gt(1 + static_cast<int>(seed % 4), rng);
        NoiseConfig cfg;
        cfg.num_groups = 2;
        cfg.num_temporal_groups = 2;
        cfg.rng_seed = seed;
        cfg.scales = {0.4, 0.2, 0.3, 0.5};
        auto gs = generate_noise(gt, cfg);
        for (const auto& s : gs.samples) {
            for (auto [d, x] : offsets(s.anchor, gt[s.gt_index], cfg.scales)) {
                if (s.band == NoiseBand::kInner) {
                    CHECK(std::abs(d) < x);
                } else {
                    CHECK(std::abs(d) >= x);
                    CHECK(std::abs(d) < 2 * x);
                }
            }
        }
    }
}

TEST_CASE("assignment: trivial 1-GT group") {
    Anchor3D gt;
    NoiseGroupSet gs;
    gs.num_gt = 1;
    gs.num_groups = 1;
    NoisySample inner{gt, 0, NoiseBand::kInner, 0, -1};
    inner.anchor.center = Eigen::Vector3d(0.05, 0, 0);
    NoisySample outer{gt, 0, NoiseBand::kOuter, 0, -1};
    outer.anchor.center = Eigen::Vector3d(0.15, 0, 0);
    gs.samples = {inner, outer};
    auto out = assign_noise_groups(gs, {gt});
    CHECK(out.samples[0].positive_gt == 0);
    CHECK(out.samples[1].positive_gt == -1);
}

TEST_CASE("assignment: outer-band sample can win (mis-assignment fix)") {
    // Per-component bands allow an outer sample to sit closer in L2.
    Anchor3D gt;
    NoiseGroupSet gs;
    gs.num_gt = 1;
    gs.num_groups = 1;
    NoisySample inner{gt, 0, NoiseBand::kInner, 0, -1};
    inner.anchor.center = Eigen::Vector3d(0.09, 0.09, 0.09);  // |d| ~ 0.156
    NoisySample outer{gt, 0, NoiseBand::kOuter, 0, -1};
    outer.anchor.center = Eigen::Vector3d(0.11, 0, 0);  // |d| = 0.11
    gs.samples = {inner, outer};
    auto out = assign_noise_groups(gs, {gt});
    CHECK(out.samples[0].positive_gt == -1);
    CHECK(out.samples[1].positive_gt == 0);
}

TEST_CASE("assignment matches brute force and positives are unique") {
    Rng rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + rng.uniform_int(0, 4);
        auto gt = random_gt(n, rng);
        NoiseConfig cfg;
        cfg.num_groups = 2;
        cfg.num_temporal_groups = 1;
        cfg.rng_seed = 1000 + rep;
        cfg.scales = {3.0, 0.3, 0.3, 1.0};  // wide position noise to make it interesting
        auto gs = assign_noise_groups(generate_noise(gt, cfg), gt);

        for (int g = 0; g < cfg.num_groups; ++g) {
            std::vector<const NoisySample*> members;
            for (const auto& s : gs.samples)
                if (s.group == g) members.push_back(&s);

            double assigned_cost = 0.0;
            std::set<int> positive_gts;
            for (const auto* s : members) {
                if (s->positive_gt < 0) continue;
                CHECK(positive_gts.insert(s->positive_gt).second);  // injective
                assigned_cost += center_distance(gt[s->positive_gt], s->anchor);
            }
            CHECK(positive_gts.size() == static_cast<size_t>(n));
            CHECK(assigned_cost == doctest::Approx(brute_force_min_cost(gt, members)).epsilon(1e-9));
        }
    }
}

TEST_CASE("select_temporal_groups") {
    Rng rng(5);
    auto gt = random_gt(2, rng);
    NoiseConfig cfg;
    cfg.num_groups = 5;
    cfg.num_temporal_groups = 3;
    auto gs = generate_noise(gt, cfg);
    auto sel = select_temporal_groups(gs, cfg);
    REQUIRE(sel.size() == 3);
    std::set<int> uniq(sel.begin(), sel.end());
    CHECK(uniq.size() == 3);
    for (int g : sel) CHECK((g >= 0 && g < 5));

    cfg.num_temporal_groups = 0;
    CHECK(select_temporal_groups(gs, cfg).empty());
    cfg.num_temporal_groups = 5;
    CHECK(select_temporal_groups(gs, cfg).size() == 5);
}

TEST_CASE("propagate_noise_groups") {
    Rng rng(6);
    auto gt = random_gt(2, rng);
    NoiseConfig cfg;
    cfg.num_groups = 3;
    auto gs = generate_noise(gt, cfg);
    EgoPose id;

    CHECK(propagate_noise_groups(gs, {}, id, id, 0.0).empty());

    auto same = propagate_noise_groups(gs, {0, 1, 2}, id, id, 0.0);
    REQUIRE(same.size() == gs.samples.size());
    for (size_t i = 0; i < same.size(); ++i) {
        CHECK(same[i].group == gs.samples[i].group);
        CHECK((same[i].anchor.center - gs.samples[i].anchor.center).cwiseAbs().maxCoeff() < 1e-12);
    }

    // Constant-velocity shift.
    for (auto& s : gs.samples) s.anchor.velocity = Eigen::Vector3d(2, 0, 0);
    auto moved = propagate_noise_groups(gs, {1}, id, id, 0.5);
    for (size_t i = 0, j = 0; i < gs.samples.size(); ++i) {
        if (gs.samples[i].group != 1) continue;
        CHECK((moved[j].anchor.center - gs.samples[i].anchor.center - Eigen::Vector3d(1, 0, 0))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        ++j;
    }
}

TEST_CASE("attention mask block structure") {
    Rng rng(7);
    auto gt1 = random_gt(1, rng);
    NoiseConfig cfg;
    cfg.num_groups = 1;
    cfg.num_temporal_groups = 1;
    auto gs = generate_noise(gt1, cfg);

    auto mask = build_attention_mask(2, gs);
    REQUIRE(mask.rows == 4);
    for (int q = 0; q < 4; ++q)
        for (int k = 0; k < 4; ++k)
            CHECK(mask.at(q, k) == ((q < 2) == (k < 2)));

    cfg.num_groups = 2;
    auto gs2 = generate_noise(gt1, cfg);
    auto mask2 = build_attention_mask(0, gs2);
    for (int q = 0; q < mask2.rows; ++q)
        for (int k = 0; k < mask2.cols; ++k)
            CHECK(mask2.at(q, k) == (gs2.samples[q].group == gs2.samples[k].group));
}

TEST_CASE("mask isolation property") {
    Rng rng(8);
    auto gt = random_gt(3, rng);
    NoiseConfig cfg;
    cfg.num_groups = 4;
    auto gs = generate_noise(gt, cfg);
    const int num_normal = 10;
    auto mask = build_attention_mask(num_normal, gs);
    for (int q = 0; q < mask.rows; ++q) {
        for (int k = 0; k < mask.cols; ++k) {
            if (!mask.at(q, k)) continue;
            const bool q_normal = q < num_normal, k_normal = k < num_normal;
            if (q_normal || k_normal) {
                CHECK(q_normal);
                CHECK(k_normal);
            } else {
                CHECK(gs.samples[q - num_normal].group == gs.samples[k - num_normal].group);
            }
        }
    }
}

TEST_CASE("hungarian agrees with brute force on random rectangles") {
    Rng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + rng.uniform_int(0, 3);
        const int m = n + rng.uniform_int(0, 3);
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (auto& row : cost)
            for (auto& v : row) v = rng.uniform(0, 10);

        auto assign = hungarian_assign(cost);
        double got = 0.0;
        std::set<int> cols;
        for (int i = 0; i < n; ++i) {
            REQUIRE(assign[i] >= 0);
            CHECK(cols.insert(assign[i]).second);
            got += cost[i][assign[i]];
        }

        // Exhaustive minimum.
        double best = std::numeric_limits<double>::infinity();
        std::vector<char> used(m, false);
        std::function<void(int, double)> rec = [&](int i, double acc) {
            if (i == n) {
                best = std::min(best, acc);
                return;
            }
            for (int j = 0; j < m; ++j) {
                if (used[j]) continue;
                used[j] = true;
                rec(i + 1, acc + cost[i][j]);
                used[j] = false;
            }
        };
        rec(0, 0.0);
        CHECK(got == doctest::Approx(best).epsilon(1e-9));
    }
}
