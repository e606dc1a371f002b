#ifndef MGKAN_KAN_HPP
#define MGKAN_KAN_HPP

#include <vector>

#include "mgkan/spline.hpp"
#include "mgkan/tape.hpp"
#include "mgkan/views.hpp"

namespace mgkan {

/// Parameters of one learnable transform d_in -> d_out.
///
/// In spline mode the transform is
///   out[r][o] = sum_i ( wb[i,o]*SiLU(x[r,i]) + ws[i,o]*sum_k c[i,o,k]*B_k(x[r,i]) )
/// with coeff stored as a (d_in*K) x d_out matrix, row index i*K+k.
/// In mlp mode it degrades to SiLU(x*W + b).
struct KanTransform {
    int d_in = 0;
    int d_out = 0;
    bool mlp = false;

    // Spline mode (owned by the model's parameter registry).
    ParamTensor* coeff = nullptr; // (d_in*K) x d_out
    ParamTensor* wb = nullptr;    // d_in x d_out
    ParamTensor* ws = nullptr;    // d_in x d_out

    // MLP mode.
    ParamTensor* w = nullptr; // d_in x d_out
    ParamTensor* b = nullptr; // 1 x d_out
};

/// Applies a KanTransform to the rows of x.
NodeId kan_transform(Tape& tape, NodeId x, const KanTransform& t, const SplineGrid& grid);

/// One message-passing layer: outer( A_hat * inner(x) ).
struct GkanLayer {
    KanTransform inner; // phi
    KanTransform outer; // Phi
};

struct EncoderStack {
    std::vector<GkanLayer> layers;
};

/// Runs an encoder stack over a propagation matrix. input_scale is
/// applied before each layer's inner transform to keep activations in
/// the spline domain.
NodeId run_stack(Tape& tape, const SpMatrix& propagation, NodeId x, const EncoderStack& stack,
                 const SplineGrid& grid, double input_scale = 1.0);

struct RoleEmbeddings {
    NodeId s_n, t_n; // asymmetric DDI view, source/target roles
    NodeId s_c, t_c; // co-interaction view
    NodeId z_s;      // similarity view
};

struct EncoderSet {
    EncoderStack ddi_src, ddi_dst;
    EncoderStack co_src, co_dst;
    EncoderStack sim;
};

struct EncodeFlags {
    bool no_dn = false;
    bool no_ci = false;
    bool no_sim = false;
};

/// Five independent stacks produce the five role embeddings; ablation
/// flags replace a view's outputs with zeros.
RoleEmbeddings encode_views(Tape& tape, const ViewSet& views, NodeId x, const EncoderSet& enc,
                            const SplineGrid& grid, const EncodeFlags& flags,
                            double input_scale = 1.0);

} // namespace mgkan

#endif // MGKAN_KAN_HPP
