#include "rqt/attention.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rqt/rng.hpp"

namespace rqt {
namespace {

Mat seeded_matrix(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-0.1, 0.1);
    return m;
}

Vec seeded_vector(int n, Rng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-0.1, 0.1);
    return v;
}

}  // namespace

AnchorEncoderParams AnchorEncoderParams::seeded(const EncoderWidths& widths, uint64_t seed) {
    Rng rng(derive_seed(seed, "anchor-encoder"));
    AnchorEncoderParams p;
    p.w_center = seeded_matrix(widths.center, 3, rng);
    p.b_center = seeded_vector(widths.center, rng);
    p.w_dims = seeded_matrix(widths.dims, 3, rng);
    p.b_dims = seeded_vector(widths.dims, rng);
    p.w_yaw = seeded_matrix(widths.yaw, 2, rng);
    p.b_yaw = seeded_vector(widths.yaw, rng);
    p.w_velocity = seeded_matrix(widths.velocity, 3, rng);
    p.b_velocity = seeded_vector(widths.velocity, rng);
    return p;
}

int AnchorEncoderParams::output_dim() const {
    return static_cast<int>(w_center.rows() + w_dims.rows() + w_yaw.rows() + w_velocity.rows());
}

Vec encode_anchor(const Anchor3D& a, const AnchorEncoderParams& p) {
    if (p.w_center.cols() != 3 || p.w_dims.cols() != 3 || p.w_yaw.cols() != 2 ||
        p.w_velocity.cols() != 3)
        throw std::invalid_argument("encode_anchor: encoder input width mismatch");

    Vec out(p.output_dim());
    int offset = 0;
    auto emit = [&](const Mat& w, const Vec& b, const Vec& x) {
        out.segment(offset, w.rows()) = w * x + b;
        offset += static_cast<int>(w.rows());
    };
    emit(p.w_center, p.b_center, a.center);
    emit(p.w_dims, p.b_dims, a.dims);
    emit(p.w_yaw, p.b_yaw, yaw_to_unit(a.yaw));
    emit(p.w_velocity, p.b_velocity, a.velocity);
    return out;
}

MhaParams MhaParams::seeded(int num_heads, int head_dim, int qk_dim, int v_dim, int out_dim,
                            uint64_t seed) {
    Rng rng(derive_seed(seed, "mha"));
    MhaParams p;
    p.num_heads = num_heads;
    p.head_dim = head_dim;
    const int proj = num_heads * head_dim;
    p.wq = seeded_matrix(proj, qk_dim, rng);
    p.wk = seeded_matrix(proj, qk_dim, rng);
    p.wv = seeded_matrix(proj, v_dim, rng);
    p.wo = seeded_matrix(out_dim, proj, rng);
    return p;
}

void MhaParams::check() const {
    const int proj = num_heads * head_dim;
    if (num_heads <= 0 || head_dim <= 0 || wq.rows() != proj || wk.rows() != proj ||
        wv.rows() != proj || wo.cols() != proj || wq.cols() != wk.cols())
        throw std::invalid_argument("MhaParams: inconsistent shapes");
}

MhaResult mha_forward(const std::vector<Vec>& queries, const std::vector<Vec>& keys,
                      const std::vector<Vec>& values, const MhaParams& params,
                      const AttentionMask* mask) {
    params.check();
    const int nq = static_cast<int>(queries.size());
    const int nk = static_cast<int>(keys.size());
    if (nk != static_cast<int>(values.size()))
        throw std::invalid_argument("mha_forward: keys/values size mismatch");
    if (mask && (mask->rows != nq || mask->cols != nk))
        throw std::invalid_argument("mha_forward: mask shape mismatch");

    // Project once, slice per head.
    Mat q(params.num_heads * params.head_dim, nq), k(params.num_heads * params.head_dim, nk),
        v(params.num_heads * params.head_dim, nk);
    for (int i = 0; i < nq; ++i) q.col(i) = params.wq * queries[i];
    for (int i = 0; i < nk; ++i) k.col(i) = params.wk * keys[i];
    for (int i = 0; i < nk; ++i) v.col(i) = params.wv * values[i];

    const double scale = 1.0 / std::sqrt(static_cast<double>(params.head_dim));

    MhaResult res;
    res.head_weights.assign(params.num_heads, Mat::Zero(nq, nk));
    Mat combined(params.num_heads * params.head_dim, nq);

    for (int h = 0; h < params.num_heads; ++h) {
        const auto qh = q.middleRows(h * params.head_dim, params.head_dim);
        const auto kh = k.middleRows(h * params.head_dim, params.head_dim);
        const auto vh = v.middleRows(h * params.head_dim, params.head_dim);
        Mat& w = res.head_weights[h];
        for (int i = 0; i < nq; ++i) {
            double max_logit = -std::numeric_limits<double>::infinity();
            std::vector<double> logits(nk, 0.0);
            bool any_allowed = false;
            for (int j = 0; j < nk; ++j) {
                if (mask && !mask->at(i, j)) continue;
                any_allowed = true;
                logits[j] = scale * qh.col(i).dot(kh.col(j));
                max_logit = std::max(max_logit, logits[j]);
            }
            if (!any_allowed) throw std::invalid_argument("mha_forward: isolated query");
            double denom = 0.0;
            for (int j = 0; j < nk; ++j) {
                if (mask && !mask->at(i, j)) continue;
                w(i, j) = std::exp(logits[j] - max_logit);
                denom += w(i, j);
            }
            Vec acc = Vec::Zero(params.head_dim);
            for (int j = 0; j < nk; ++j) {
                if (mask && !mask->at(i, j)) continue;
                w(i, j) /= denom;
                acc += w(i, j) * vh.col(j);
            }
            combined.col(i).segment(h * params.head_dim, params.head_dim) = acc;
        }
    }

    res.outputs.reserve(nq);
    for (int i = 0; i < nq; ++i) res.outputs.push_back(params.wo * combined.col(i));
    return res;
}

MhaResult attn_additive(const std::vector<Vec>& features, const std::vector<Vec>& embeddings,
                        const MhaParams& params, const AttentionMask* mask) {
    if (features.size() != embeddings.size())
        throw std::invalid_argument("attn_additive: size mismatch");
    std::vector<Vec> summed;
    summed.reserve(features.size());
    for (size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != embeddings[i].size())
            throw std::invalid_argument("attn_additive: dimension mismatch");
        summed.push_back(features[i] + embeddings[i]);
    }
    return mha_forward(summed, summed, summed, params, mask);
}

MhaResult attn_decoupled(const std::vector<Vec>& features, const std::vector<Vec>& embeddings,
                         const MhaParams& params_wide, const AttentionMask* mask) {
    if (features.size() != embeddings.size())
        throw std::invalid_argument("attn_decoupled: size mismatch");
    std::vector<Vec> cat;
    cat.reserve(features.size());
    for (size_t i = 0; i < features.size(); ++i) {
        Vec c(features[i].size() + embeddings[i].size());
        c << features[i], embeddings[i];
        cat.push_back(std::move(c));
    }
    if (!cat.empty() && params_wide.wq.cols() != cat[0].size())
        throw std::invalid_argument("attn_decoupled: params not sized for [F; E] input");
    return mha_forward(cat, cat, features, params_wide, mask);
}

DivergenceWitness find_divergence_witness(uint64_t seed) {
    const int n = 6, d = 16;
    for (int attempt = 0; attempt < 32; ++attempt) {
        Rng rng(derive_seed(seed + attempt, "witness"));
        std::vector<Vec> f, e;
        for (int i = 0; i < n; ++i) {
            Vec fi(d), ei(d);
            for (int c = 0; c < d; ++c) fi[c] = rng.uniform(-1.0, 1.0);
            for (int c = 0; c < d; ++c) ei[c] = 40.0 * rng.uniform(-1.0, 1.0);
            f.push_back(fi);
            e.push_back(ei);
        }
        MhaParams narrow = MhaParams::seeded(2, 8, d, d, d, seed + attempt);
        MhaParams wide = MhaParams::seeded(2, 8, 2 * d, d, d, seed + attempt + 1000);

        MhaResult add = attn_additive(f, e, narrow);
        MhaResult dec = attn_decoupled(f, e, wide);

        for (int q = 0; q < n; ++q) {
            Eigen::Index add_argmax = 0, dec_argmax = 0;
            add.head_weights[0].row(q).maxCoeff(&add_argmax);
            dec.head_weights[0].row(q).maxCoeff(&dec_argmax);
            if (add_argmax != dec_argmax) {
                DivergenceWitness w;
                w.found = true;
                w.query = q;
                w.additive_weights = add.head_weights[0];
                w.decoupled_weights = dec.head_weights[0];
                return w;
            }
        }
    }
    return {};
}

}  // namespace rqt
