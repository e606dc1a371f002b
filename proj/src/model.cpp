#include "mgkan/model.hpp"

#include <cmath>

#include "mgkan/errors.hpp"

namespace mgkan {

namespace {

Matrix xavier_uniform(Index rows, Index cols, Rng& rng) {
    double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -a, a);
    return m;
}

Matrix gaussian_matrix(Index rows, Index cols, double sd, Rng& rng) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = gaussian(rng, 0.0, sd);
    return m;
}

} // namespace

void ModelConfig::validate() const {
    if (hidden_dim < 1) throw ConfigError("model: hidden_dim must be positive");
    if (layers < 1) throw ConfigError("model: layers must be positive");
    if (grid_size < 1) throw ConfigError("model: grid_size must be positive");
    if (spline_order < 0) throw ConfigError("model: spline_order must be non-negative");
    if (!(spline_min < spline_max)) throw ConfigError("model: spline domain empty");
    if (embedding_dim < 1) throw ConfigError("model: embedding_dim must be positive");
    if (input_scale <= 0.0) throw ConfigError("model: input_scale must be positive");
    if (no_af && no_kf)
        throw ConfigError("model: no_af and no_kf together leave nothing to decode");
}

Model::Model(const ModelConfig& cfg, Index n_drugs, const Matrix* features, std::uint64_t seed)
    : cfg_(cfg),
      n_(n_drugs),
      grid_(cfg.spline_min, cfg.spline_max, cfg.grid_size, cfg.spline_order) {
    cfg_.validate();
    if (cfg_.symmetric_control) cfg_.share_encoders = true;
    if (n_ < 1) throw ConfigError("model: need at least one drug");

    Rng rng(mix_seed(seed, 0x6d6f64656cULL));

    Index d;
    if (features != nullptr) {
        require_dims(features->rows() == n_, "model: feature row count");
        features_ = *features;
        d = features_.cols();
        if (d < 1) throw ConfigError("model: empty feature matrix");
    } else {
        free_embedding_ = true;
        d = cfg_.embedding_dim;
        x_embed_ = add_param("feat.X", gaussian_matrix(n_, d, 0.1, rng));
    }

    const int din = static_cast<int>(d);
    enc_.ddi_src = make_stack("enc.ddi_src.", din, rng);
    enc_.ddi_dst = cfg_.share_encoders ? enc_.ddi_src : make_stack("enc.ddi_dst.", din, rng);
    enc_.co_src = make_stack("enc.co_src.", din, rng);
    enc_.co_dst = cfg_.share_encoders ? enc_.co_src : make_stack("enc.co_dst.", din, rng);
    enc_.sim = make_stack("enc.sim.", din, rng);

    attn_src_ = make_attention("attn.src.", rng);
    attn_dst_ = cfg_.share_encoders ? attn_src_ : make_attention("attn.dst.", rng);

    const int h = cfg_.hidden_dim;
    fuse_src_ = make_transform("fuse.src.", 3 * h, h, rng);
    fuse_dst_ = cfg_.share_encoders ? fuse_src_ : make_transform("fuse.dst.", 3 * h, h, rng);

    const int fd = cfg_.fused_dim();
    decoder_m_ = add_param("dec.M", xavier_uniform(fd, fd, rng));
}

ParamTensor* Model::add_param(const std::string& name, Matrix init) {
    storage_.push_back(std::make_unique<ParamTensor>(name, std::move(init)));
    params_.push_back(storage_.back().get());
    return storage_.back().get();
}

KanTransform Model::make_transform(const std::string& prefix, int d_in, int d_out, Rng& rng) {
    KanTransform t;
    t.d_in = d_in;
    t.d_out = d_out;
    t.mlp = cfg_.no_kan;
    if (t.mlp) {
        t.w = add_param(prefix + "W", xavier_uniform(d_in, d_out, rng));
        t.b = add_param(prefix + "b", Matrix::Zero(1, d_out));
    } else {
        const int k = grid_.basis_count();
        double sd = 0.1 / std::sqrt(static_cast<double>(k));
        t.coeff = add_param(prefix + "c", gaussian_matrix(static_cast<Index>(d_in) * k, d_out, sd, rng));
        t.wb = add_param(prefix + "wb", xavier_uniform(d_in, d_out, rng));
        t.ws = add_param(prefix + "ws", Matrix::Ones(d_in, d_out));
    }
    return t;
}

EncoderStack Model::make_stack(const std::string& prefix, int d_in, Rng& rng) {
    EncoderStack stack;
    const int h = cfg_.hidden_dim;
    for (int l = 0; l < cfg_.layers; ++l) {
        GkanLayer layer;
        int in = (l == 0) ? d_in : h;
        std::string lp = prefix + "l" + std::to_string(l) + ".";
        layer.inner = make_transform(lp + "inner.", in, h, rng);
        layer.outer = make_transform(lp + "outer.", h, h, rng);
        stack.layers.push_back(layer);
    }
    return stack;
}

AttentionParams Model::make_attention(const std::string& prefix, Rng& rng) {
    AttentionParams p;
    const int h = cfg_.hidden_dim;
    p.w = add_param(prefix + "W", xavier_uniform(h, h, rng));
    p.b = add_param(prefix + "b", Matrix::Zero(1, h));
    p.q = add_param(prefix + "q", xavier_uniform(h, 1, rng));
    return p;
}

Model::Forward Model::embed(Tape& tape, const ViewSet& views) const {
    require_dims(views.a_out.rows() == n_, "model: view size");
    Forward fwd;

    NodeId x = free_embedding_ ? tape.param(*x_embed_) : tape.constant(features_);

    EncodeFlags flags;
    flags.no_dn = cfg_.no_dn;
    flags.no_ci = cfg_.no_ci;
    flags.no_sim = cfg_.no_sim;
    fwd.roles = encode_views(tape, views, x, enc_, grid_, flags, cfg_.input_scale);

    std::vector<NodeId> s_parts, t_parts;
    if (!cfg_.no_af) {
        AttentionResult src =
            attention_fuse(tape, fwd.roles.s_n, fwd.roles.s_c, fwd.roles.z_s, attn_src_,
                           cfg_.per_drug_attention);
        AttentionResult dst =
            attention_fuse(tape, fwd.roles.t_n, fwd.roles.t_c, fwd.roles.z_s, attn_dst_,
                           cfg_.per_drug_attention);
        fwd.s_attn = src.fused;
        fwd.t_attn = dst.fused;
        fwd.alphas_src = src.alphas;
        fwd.alphas_dst = dst.alphas;
        s_parts.push_back(src.fused);
        t_parts.push_back(dst.fused);
    }
    if (!cfg_.no_kf) {
        fwd.s_nl = kan_fuse(tape, fwd.roles.s_n, fwd.roles.s_c, fwd.roles.z_s, fuse_src_, grid_);
        fwd.t_nl = kan_fuse(tape, fwd.roles.t_n, fwd.roles.t_c, fwd.roles.z_s, fuse_dst_, grid_);
        s_parts.push_back(fwd.s_nl);
        t_parts.push_back(fwd.t_nl);
    }
    fwd.s = s_parts.size() == 1 ? s_parts[0] : tape.concat_cols(s_parts);
    fwd.t = t_parts.size() == 1 ? t_parts[0] : tape.concat_cols(t_parts);

    NodeId m = tape.param(*decoder_m_);
    if (cfg_.symmetric_control) m = tape.scale(tape.add(m, tape.transpose(m)), 0.5);
    fwd.m = m;
    return fwd;
}

NodeId Model::score(Tape& tape, const Forward& fwd, const std::vector<Edge>& pairs) const {
    return score_pairs(tape, fwd.s, fwd.t, fwd.m, pairs);
}

NodeId Model::loss(Tape& tape, const ViewSet& views, const std::vector<Edge>& pairs,
                   const Matrix& labels) const {
    Forward fwd = embed(tape, views);
    NodeId probs = score(tape, fwd, pairs);
    return tape.bce_loss(probs, labels);
}

Model::Frozen Model::embed_frozen(const ViewSet& views) const {
    Tape tape;
    Forward fwd = embed(tape, views);
    return Frozen{tape.value(fwd.s), tape.value(fwd.t), tape.value(fwd.m)};
}

ParamTensor* Model::find(std::string_view name) const {
    for (ParamTensor* p : params_)
        if (p->name == name) return p;
    return nullptr;
}

void Model::zero_grads() const {
    for (ParamTensor* p : params_) p->zero_grad();
}

bool Model::params_finite() const {
    for (ParamTensor* p : params_)
        if (!p->value.allFinite()) return false;
    return true;
}

std::vector<Matrix> Model::snapshot() const {
    std::vector<Matrix> snap;
    snap.reserve(params_.size());
    for (ParamTensor* p : params_) snap.push_back(p->value);
    return snap;
}

void Model::restore(const std::vector<Matrix>& snap) {
    if (snap.size() != params_.size()) throw UsageError("model: snapshot size mismatch");
    for (std::size_t i = 0; i < snap.size(); ++i) params_[i]->value = snap[i];
}

Index Model::input_dim() const {
    return free_embedding_ ? cfg_.embedding_dim : features_.cols();
}

} // namespace mgkan
