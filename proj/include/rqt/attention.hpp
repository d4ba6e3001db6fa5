#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rqt/attention_mask.hpp"
#include "rqt/geometry.hpp"

namespace rqt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Widths of the four independent anchor sub-encoders; they concatenate to the
// embedding dimension.
struct EncoderWidths {
    int center = 128;
    int dims = 32;
    int yaw = 32;
    int velocity = 64;

    int total() const { return center + dims + yaw + velocity; }
};

// One linear block per anchor component; yaw enters as (sin, cos).
struct AnchorEncoderParams {
    Mat w_center, w_dims, w_yaw, w_velocity;  // (width_i x input_dim)
    Vec b_center, b_dims, b_yaw, b_velocity;

    static AnchorEncoderParams seeded(const EncoderWidths& widths, uint64_t seed);
    int output_dim() const;
};

Vec encode_anchor(const Anchor3D& a, const AnchorEncoderParams& params);

struct MhaParams {
    int num_heads = 8;
    int head_dim = 32;
    Mat wq, wk;  // (num_heads * head_dim x query/key input dim)
    Mat wv;      // (num_heads * head_dim x value input dim)
    Mat wo;      // (output dim x num_heads * head_dim)

    static MhaParams seeded(int num_heads, int head_dim, int qk_dim, int v_dim, int out_dim,
                            uint64_t seed);
    void check() const;
};

struct MhaResult {
    std::vector<Vec> outputs;       // one per query
    std::vector<Mat> head_weights;  // per head, (num_queries x num_keys)
};

// Scaled dot-product multi-head attention with an optional boolean mask.
// Masked entries carry exactly zero weight; a fully-masked query is an error.
MhaResult mha_forward(const std::vector<Vec>& queries, const std::vector<Vec>& keys,
                      const std::vector<Vec>& values, const MhaParams& params,
                      const AttentionMask* mask = nullptr);

// Vanilla variant: anchor embedding added to the instance feature before the
// shared query/key/value projection.
MhaResult attn_additive(const std::vector<Vec>& features, const std::vector<Vec>& embeddings,
                        const MhaParams& params, const AttentionMask* mask = nullptr);

// Decoupled variant: queries/keys are the concatenation [feature; embedding],
// values carry the feature alone so the output stays in feature space.
MhaResult attn_decoupled(const std::vector<Vec>& features, const std::vector<Vec>& embeddings,
                         const MhaParams& params_wide, const AttentionMask* mask = nullptr);

// Constructed input where additive and decoupled attention rank keys
// differently for at least one query (large-norm embeddings dominating the
// additive logits). head_weights hold the first head's weight matrices.
struct DivergenceWitness {
    bool found = false;
    int query = -1;
    Mat additive_weights;
    Mat decoupled_weights;
};

DivergenceWitness find_divergence_witness(uint64_t seed);

}  // namespace rqt
