#pragma once

#include "rqt/geometry.hpp"

namespace rqt {

struct QualityTargets {
    double centerness = 1.0;  // (0, 1]
    double yawness = 1.0;     // [-1, 1]
};

struct QualityLossWeights {
    double lambda_yaw = 1.0;     // weight on the yawness term
    double lambda_center = 1.0;  // weight on the centerness term
};

struct QualityLossOptions {
    double focal_gamma = 2.0;
    double focal_alpha = 0.25;
    // Default pairing: cross-entropy on yawness, focal on centerness. The
    // switch swaps the two.
    bool swap_pairing = false;
};

// exp(-||center_pred - center_gt||), in (0, 1].
double centerness(const Anchor3D& pred, const Anchor3D& gt);

// Dot product of heading unit vectors = cos(yaw_pred - yaw_gt), in [-1, 1].
double yawness(double pred_yaw, double gt_yaw);

QualityTargets quality_targets(const Anchor3D& pred, const Anchor3D& gt);

// Weighted sum of a cross-entropy-style term (shifted so it vanishes at the
// target) and a focal term. Yawness values are rescaled to [0, 1] via
// (y + 1) / 2 before the probabilistic losses apply.
double quality_loss(double centerness_pred, double yawness_pred, const QualityTargets& targets,
                    const QualityLossWeights& w, const QualityLossOptions& opt = {});

struct QualityLossGrad {
    double d_centerness = 0.0;
    double d_yawness = 0.0;
};

QualityLossGrad quality_loss_grad(double centerness_pred, double yawness_pred,
                                  const QualityTargets& targets, const QualityLossWeights& w,
                                  const QualityLossOptions& opt = {});

// Inference-time ranking score: centerness estimate times confidence.
double ranking_score(double confidence, double centerness_pred);

}  // namespace rqt
