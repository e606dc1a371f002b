#include "mgkan/fusion.hpp"

#include <array>
#include <cmath>

#include "mgkan/errors.hpp"

namespace mgkan {

AttentionResult attention_fuse(Tape& tape, NodeId f1, NodeId f2, NodeId f3,
                               const AttentionParams& params, bool per_drug) {
    const std::array<NodeId, 3> views = {f1, f2, f3};
    const Matrix& v0 = tape.value(f1);
    for (NodeId f : views)
        require_dims(tape.value(f).rows() == v0.rows() && tape.value(f).cols() == v0.cols(),
                     "attention_fuse: equal view shapes");

    NodeId w = tape.param(*params.w);
    NodeId b = tape.param(*params.b);
    NodeId q = tape.param(*params.q);

    std::array<NodeId, 3> scores{};
    for (int i = 0; i < 3; ++i) {
        NodeId proj = tape.tanh(tape.add_rowvec(tape.matmul(views[i], w), b));
        if (per_drug) {
            scores[i] = tape.matmul(proj, q); // N x 1
        } else {
            scores[i] = tape.matmul(tape.colwise_mean(proj), q); // 1 x 1
        }
    }
    NodeId wmat = tape.concat_cols(scores); // (1|N) x 3
    NodeId alphas = tape.softmax_rows(wmat);

    AttentionResult out{};
    out.alphas = alphas;
    NodeId fused = -1;
    for (int i = 0; i < 3; ++i) {
        NodeId weighted = per_drug ? tape.cmul_colvec(views[i], tape.col(alphas, i))
                                   : tape.mul_scalar(views[i], tape.col(alphas, i));
        fused = (i == 0) ? weighted : tape.add(fused, weighted);
    }
    out.fused = fused;
    return out;
}

NodeId kan_fuse(Tape& tape, NodeId f1, NodeId f2, NodeId f3, const KanTransform& t,
                const SplineGrid& grid) {
    const std::array<NodeId, 3> parts = {f1, f2, f3};
    NodeId cat = tape.concat_cols(parts);
    require_dims(tape.value(cat).cols() == t.d_in, "kan_fuse input width");
    return kan_transform(tape, cat, t, grid);
}

NodeId score_pairs(Tape& tape, NodeId s, NodeId t, NodeId m, const std::vector<Edge>& pairs) {
    if (pairs.empty()) throw UsageError("score_pairs: empty pair list");
    std::vector<Index> src, dst;
    src.reserve(pairs.size());
    dst.reserve(pairs.size());
    for (const Edge& p : pairs) {
        src.push_back(p.first);
        dst.push_back(p.second);
    }
    NodeId su = tape.gather_rows(s, std::move(src));
    NodeId tv = tape.gather_rows(t, std::move(dst));
    NodeId logits = tape.rowwise_sum(tape.mul(tape.matmul(su, m), tv));
    return tape.sigmoid(logits);
}

Vector score_pairs(const Matrix& s, const Matrix& t, const Matrix& m,
                   const std::vector<Edge>& pairs) {
    require_dims(s.cols() == m.rows() && m.cols() == t.cols(), "score_pairs dimensions");
    Vector out(static_cast<Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Edge& p = pairs[i];
        if (p.first < 0 || p.first >= s.rows() || p.second < 0 || p.second >= t.rows())
            throw RequestError("score_pairs: pair index out of range");
        double logit = (s.row(p.first) * m).dot(t.row(p.second));
        out(static_cast<Index>(i)) =
            logit >= 0.0 ? 1.0 / (1.0 + std::exp(-logit)) : std::exp(logit) / (1.0 + std::exp(logit));
    }
    return out;
}

} // namespace mgkan
