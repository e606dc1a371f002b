#ifndef MGKAN_TAPE_HPP
#define MGKAN_TAPE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgkan/matrix.hpp"
#include "mgkan/spline.hpp"

namespace mgkan {

/// Named learnable tensor with a gradient accumulator of identical shape.
struct ParamTensor {
    std::string name;
    Matrix value;
    Matrix grad;

    ParamTensor(std::string n, Matrix v)
        : name(std::move(n)),
          value(std::move(v)),
          grad(Matrix::Zero(value.rows(), value.cols())) {}

    void zero_grad() { grad.setZero(); }
    Index size() const { return value.size(); }
};

using NodeId = std::int32_t;

/// Reverse-mode differentiation over a recorded operation tape.
///
/// The operation vocabulary is fixed: the graph of one training step is
/// static, so every op carries its own exact adjoint and the whole tape
/// is finite-difference checkable. Values are double-precision dense
/// matrices; vectors are n-by-1, scalars 1-by-1.
///
/// One logical thread owns a tape. Sparse operands passed to spmm() are
/// referenced, not copied; the caller keeps them alive until backward().
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Leaves.
    NodeId constant(Matrix v);
    NodeId zeros(Index rows, Index cols);
    NodeId param(ParamTensor& p);

    // Linear algebra.
    NodeId matmul(NodeId a, NodeId b);
    NodeId spmm(const SpMatrix& a, NodeId x);
    NodeId transpose(NodeId a);

    // Elementwise.
    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId scale(NodeId a, double s);
    NodeId silu(NodeId a);
    NodeId sigmoid(NodeId a);
    NodeId tanh(NodeId a);

    // Broadcasts.
    NodeId mul_scalar(NodeId a, NodeId s);      // s is 1x1
    NodeId cmul_colvec(NodeId a, NodeId c);     // c is rows x 1
    NodeId add_rowvec(NodeId a, NodeId r);      // r is 1 x cols

    // Shape ops.
    NodeId concat_cols(std::span<const NodeId> parts);
    NodeId gather_rows(NodeId a, std::vector<Index> rows);
    NodeId repeat_rows(NodeId a, int times);    // row i -> rows i*times .. i*times+times-1
    NodeId col(NodeId a, Index j);

    // Reductions.
    NodeId rowwise_sum(NodeId a);
    NodeId colwise_mean(NodeId a);
    NodeId reduce_sum(NodeId a);
    NodeId softmax_rows(NodeId a);

    // Nonlinearities with internal state.
    NodeId spline_basis(NodeId a, const SplineGrid& grid);

    /// Mean binary cross-entropy of probabilities against {0,1} labels.
    /// Probabilities are clamped to [1e-12, 1-1e-12] before the logs.
    NodeId bce_loss(NodeId probs, const Matrix& labels);

    /// Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. Bound
    /// parameter gradients are zeroed first, then accumulated; parameters
    /// not reachable from the loss end up with zero gradient.
    void backward(NodeId loss);

    const Matrix& value(NodeId id) const { return at(id).value; }
    const Matrix& grad(NodeId id) const { return at(id).grad; }
    double scalar(NodeId id) const;
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        // Adds this node's adjoint contribution into its parents.
        std::function<void(Tape&, const Matrix&)> pull;
    };

    NodeId push(Matrix v, std::function<void(Tape&, const Matrix&)> pull);
    Node& at(NodeId id);
    const Node& at(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<ParamTensor*> bound_;
};

} // namespace mgkan

#endif // MGKAN_TAPE_HPP
