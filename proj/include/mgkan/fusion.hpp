#ifndef MGKAN_FUSION_HPP
#define MGKAN_FUSION_HPP

#include <vector>

#include "mgkan/graph.hpp"
#include "mgkan/kan.hpp"
#include "mgkan/tape.hpp"

namespace mgkan {

struct AttentionParams {
    ParamTensor* w = nullptr; // h x h projection
    ParamTensor* b = nullptr; // 1 x h bias
    ParamTensor* q = nullptr; // h x 1 query
};

struct AttentionResult {
    NodeId fused;  // same shape as the inputs
    NodeId alphas; // 1 x 3 (per-view) or N x 3 (per-drug) softmax weights
};

/// Attention over three equally shaped view embeddings.
///
/// Per-view mode scores each view by q' * rowmean(tanh(F_i*W + b)) and
/// mixes the views with one softmax weight each; per-drug mode computes
/// the same score per row, giving every drug its own weights.
AttentionResult attention_fuse(Tape& tape, NodeId f1, NodeId f2, NodeId f3,
                               const AttentionParams& params, bool per_drug = false);

/// Column-concatenates the three views (3h wide) and applies a KAN
/// transform back to width h.
NodeId kan_fuse(Tape& tape, NodeId f1, NodeId f2, NodeId f3, const KanTransform& t,
                const SplineGrid& grid);

/// Scores ordered pairs: sigmoid(S_u' * M * T_v). m is the (possibly
/// symmetrized) decoder matrix node.
NodeId score_pairs(Tape& tape, NodeId s, NodeId t, NodeId m, const std::vector<Edge>& pairs);

/// Inference-path scoring with frozen embeddings; pure and thread-safe.
Vector score_pairs(const Matrix& s, const Matrix& t, const Matrix& m,
                   const std::vector<Edge>& pairs);

} // namespace mgkan

#endif // MGKAN_FUSION_HPP
