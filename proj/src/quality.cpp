#include "rqt/quality.hpp"

#include <cmath>
#include <stdexcept>

namespace rqt {
namespace {

constexpr double kEps = 1e-7;  // probability clamp before logs

double clamp_prob(double p) { return std::min(std::max(p, kEps), 1.0 - kEps); }

// Cross entropy shifted by the target's entropy (i.e. KL(t || p)): nonnegative
// and zero exactly at p = t, which plain CE is not for soft targets.
double ce_term(double p, double t) {
    double v = 0.0;
    if (t > 0.0) v += t * std::log(t / p);
    if (t < 1.0) v += (1.0 - t) * std::log((1.0 - t) / (1.0 - p));
    return v;
}

double ce_term_grad(double p, double t) {
    return -t / p + (1.0 - t) / (1.0 - p);
}

double focal_term(double p, double t, double gamma, double alpha) {
    const double mod = std::pow(std::abs(t - p), gamma);
    return -alpha * mod * (t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
}

double focal_term_grad(double p, double t, double gamma, double alpha) {
    const double diff = std::abs(t - p);
    const double bce = t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    const double sign = p > t ? 1.0 : (p < t ? -1.0 : 0.0);
    const double d_mod = diff > 0.0 ? gamma * std::pow(diff, gamma - 1.0) * sign : 0.0;
    return -alpha * (d_mod * bce + std::pow(diff, gamma) * (t / p - (1.0 - t) / (1.0 - p)));
}

}  // namespace

double centerness(const Anchor3D& pred, const Anchor3D& gt) {
    return std::exp(-center_distance(pred, gt));
}

double yawness(double pred_yaw, double gt_yaw) {
    return yaw_to_unit(pred_yaw).dot(yaw_to_unit(gt_yaw));
}

QualityTargets quality_targets(const Anchor3D& pred, const Anchor3D& gt) {
    return {centerness(pred, gt), yawness(pred.yaw, gt.yaw)};
}

double quality_loss(double centerness_pred, double yawness_pred, const QualityTargets& targets,
                    const QualityLossWeights& w, const QualityLossOptions& opt) {
    if (!std::isfinite(centerness_pred) || !std::isfinite(yawness_pred))
        throw std::invalid_argument("quality_loss: non-finite prediction");

    const double pc = clamp_prob(centerness_pred);
    const double tc = clamp_prob(targets.centerness);
    const double py = clamp_prob((yawness_pred + 1.0) / 2.0);
    const double ty = clamp_prob((targets.yawness + 1.0) / 2.0);

    double yaw_loss, center_loss;
    if (!opt.swap_pairing) {
        yaw_loss = ce_term(py, ty);
        center_loss = focal_term(pc, tc, opt.focal_gamma, opt.focal_alpha);
    } else {
        yaw_loss = focal_term(py, ty, opt.focal_gamma, opt.focal_alpha);
        center_loss = ce_term(pc, tc);
    }
    return w.lambda_yaw * yaw_loss + w.lambda_center * center_loss;
}

QualityLossGrad quality_loss_grad(double centerness_pred, double yawness_pred,
                                  const QualityTargets& targets, const QualityLossWeights& w,
                                  const QualityLossOptions& opt) {
    if (!std::isfinite(centerness_pred) || !std::isfinite(yawness_pred))
        throw std::invalid_argument("quality_loss_grad: non-finite prediction");

    const double pc = clamp_prob(centerness_pred);
    const double tc = clamp_prob(targets.centerness);
    const double py = clamp_prob((yawness_pred + 1.0) / 2.0);
    const double ty = clamp_prob((targets.yawness + 1.0) / 2.0);

    double d_py, d_pc;
    if (!opt.swap_pairing) {
        d_py = ce_term_grad(py, ty);
        d_pc = focal_term_grad(pc, tc, opt.focal_gamma, opt.focal_alpha);
    } else {
        d_py = focal_term_grad(py, ty, opt.focal_gamma, opt.focal_alpha);
        d_pc = ce_term_grad(pc, tc);
    }

    QualityLossGrad g;
    g.d_centerness = w.lambda_center * d_pc;
    g.d_yawness = w.lambda_yaw * d_py * 0.5;  // chain rule through (y + 1) / 2
    return g;
}

double ranking_score(double confidence, double centerness_pred) {
    return confidence * centerness_pred;
}

}  // namespace rqt
