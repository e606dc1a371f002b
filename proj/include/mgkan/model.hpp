#ifndef MGKAN_MODEL_HPP
#define MGKAN_MODEL_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mgkan/fusion.hpp"
#include "mgkan/kan.hpp"
#include "mgkan/rng.hpp"
#include "mgkan/tape.hpp"
#include "mgkan/views.hpp"

namespace mgkan {

struct ModelConfig {
    int hidden_dim = 64;
    int layers = 2;
    int grid_size = 5;    // interior spline intervals
    int spline_order = 3; // polynomial degree
    double spline_min = -1.0;
    double spline_max = 1.0;
    double input_scale = 1.0;
    int embedding_dim = 64; // free-embedding width when features are absent
    bool per_drug_attention = false;

    // Ablation switches.
    bool no_kan = false;
    bool no_af = false;
    bool no_kf = false;
    bool no_dn = false;
    bool no_ci = false;
    bool no_sim = false;

    /// Source/target stacks and fusion share parameters; views are
    /// expected symmetrized and the decoder matrix is symmetrized, so
    /// scores satisfy y(u,v) == y(v,u) exactly.
    bool symmetric_control = false;
    /// Parameter sharing without the symmetry constraints (used by the
    /// transpose-duality check).
    bool share_encoders = false;

    int fused_dim() const { return ((no_af ? 0 : 1) + (no_kf ? 0 : 1)) * hidden_dim; }
    void validate() const;
};

/// The full encoder/fusion/decoder stack with its parameter registry.
class Model {
public:
    /// features: N x d binary matrix, or nullptr for a trainable
    /// free-embedding table of width embedding_dim.
    Model(const ModelConfig& cfg, Index n_drugs, const Matrix* features, std::uint64_t seed);

    struct Forward {
        RoleEmbeddings roles{};
        NodeId s_attn = -1, t_attn = -1;
        NodeId s_nl = -1, t_nl = -1;
        NodeId alphas_src = -1, alphas_dst = -1;
        NodeId s = -1, t = -1;
        NodeId m = -1;
    };

    Forward embed(Tape& tape, const ViewSet& views) const;
    NodeId score(Tape& tape, const Forward& fwd, const std::vector<Edge>& pairs) const;
    NodeId loss(Tape& tape, const ViewSet& views, const std::vector<Edge>& pairs,
                const Matrix& labels) const;

    /// Frozen embeddings for inference and evaluation.
    struct Frozen {
        Matrix s, t, m;
    };
    Frozen embed_frozen(const ViewSet& views) const;

    const std::vector<ParamTensor*>& params() const { return params_; }
    ParamTensor* find(std::string_view name) const;
    void zero_grads() const;
    bool params_finite() const;

    std::vector<Matrix> snapshot() const;
    void restore(const std::vector<Matrix>& snap);

    const ModelConfig& config() const { return cfg_; }
    const SplineGrid& grid() const { return grid_; }
    Index n_drugs() const { return n_; }
    Index input_dim() const;
    bool uses_free_embedding() const { return free_embedding_; }

private:
    ParamTensor* add_param(const std::string& name, Matrix init);
    KanTransform make_transform(const std::string& prefix, int d_in, int d_out, Rng& rng);
    EncoderStack make_stack(const std::string& prefix, int d_in, Rng& rng);
    AttentionParams make_attention(const std::string& prefix, Rng& rng);

    ModelConfig cfg_;
    Index n_ = 0;
    SplineGrid grid_;
    Matrix features_;
    bool free_embedding_ = false;

    std::vector<std::unique_ptr<ParamTensor>> storage_;
    std::vector<ParamTensor*> params_;

    EncoderSet enc_{};
    AttentionParams attn_src_{}, attn_dst_{};
    KanTransform fuse_src_{}, fuse_dst_{};
    ParamTensor* decoder_m_ = nullptr;
    ParamTensor* x_embed_ = nullptr;
};

} // namespace mgkan

#endif // MGKAN_MODEL_HPP
