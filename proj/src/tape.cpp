#include "mgkan/tape.hpp"

#include <cmath>

#include "mgkan/errors.hpp"

namespace mgkan {

namespace {

constexpr double kProbEps = 1e-12;

inline double sigmoid_scalar(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

} // namespace

Tape::Node& Tape::at(NodeId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw UsageError("tape: invalid node id");
    return nodes_[static_cast<std::size_t>(id)];
}

const Tape::Node& Tape::at(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw UsageError("tape: invalid node id");
    return nodes_[static_cast<std::size_t>(id)];
}

NodeId Tape::push(Matrix v, std::function<void(Tape&, const Matrix&)> pull) {
    nodes_.push_back(Node{std::move(v), Matrix(), std::move(pull)});
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::constant(Matrix v) { return push(std::move(v), nullptr); }

NodeId Tape::zeros(Index rows, Index cols) { return constant(Matrix::Zero(rows, cols)); }

NodeId Tape::param(ParamTensor& p) {
    bound_.push_back(&p);
    ParamTensor* ptr = &p;
    return push(p.value, [ptr](Tape&, const Matrix& g) { ptr->grad += g; });
}

NodeId Tape::matmul(NodeId a, NodeId b) {
    const Matrix& va = at(a).value;
    const Matrix& vb = at(b).value;
    require_dims(va.cols() == vb.rows(), "matmul");
    return push(va * vb, [a, b](Tape& t, const Matrix& g) {
        t.at(a).grad.noalias() += g * t.at(b).value.transpose();
        t.at(b).grad.noalias() += t.at(a).value.transpose() * g;
    });
}

NodeId Tape::spmm(const SpMatrix& m, NodeId x) {
    const Matrix& vx = at(x).value;
    require_dims(m.cols() == vx.rows(), "spmm");
    const SpMatrix* mp = &m;
    return push(m * vx, [mp, x](Tape& t, const Matrix& g) {
        t.at(x).grad.noalias() += mp->transpose() * g;
    });
}

NodeId Tape::transpose(NodeId a) {
    return push(at(a).value.transpose(),
                [a](Tape& t, const Matrix& g) { t.at(a).grad += g.transpose(); });
}

NodeId Tape::add(NodeId a, NodeId b) {
    const Matrix& va = at(a).value;
    const Matrix& vb = at(b).value;
    require_dims(va.rows() == vb.rows() && va.cols() == vb.cols(), "add");
    return push(va + vb, [a, b](Tape& t, const Matrix& g) {
        t.at(a).grad += g;
        t.at(b).grad += g;
    });
}

NodeId Tape::mul(NodeId a, NodeId b) {
    const Matrix& va = at(a).value;
    const Matrix& vb = at(b).value;
    require_dims(va.rows() == vb.rows() && va.cols() == vb.cols(), "mul");
    return push(va.cwiseProduct(vb), [a, b](Tape& t, const Matrix& g) {
        t.at(a).grad += g.cwiseProduct(t.at(b).value);
        t.at(b).grad += g.cwiseProduct(t.at(a).value);
    });
}

NodeId Tape::scale(NodeId a, double s) {
    return push(at(a).value * s,
                [a, s](Tape& t, const Matrix& g) { t.at(a).grad += s * g; });
}

NodeId Tape::silu(NodeId a) {
    const Matrix& x = at(a).value;
    Matrix v = x.unaryExpr([](double e) { return e * sigmoid_scalar(e); });
    return push(std::move(v), [a](Tape& t, const Matrix& g) {
        const Matrix& x = t.at(a).value;
        Matrix d = x.unaryExpr([](double e) {
            double s = sigmoid_scalar(e);
            return s * (1.0 + e * (1.0 - s));
        });
        t.at(a).grad += g.cwiseProduct(d);
    });
}

NodeId Tape::sigmoid(NodeId a) {
    Matrix v = at(a).value.unaryExpr([](double e) { return sigmoid_scalar(e); });
    NodeId id = push(std::move(v), nullptr);
    at(id).pull = [a, id](Tape& t, const Matrix& g) {
        const Matrix& v = t.at(id).value;
        t.at(a).grad += g.cwiseProduct(v.cwiseProduct(Matrix::Ones(v.rows(), v.cols()) - v));
    };
    return id;
}

NodeId Tape::tanh(NodeId a) {
    Matrix v = at(a).value.array().tanh();
    NodeId id = push(std::move(v), nullptr);
    at(id).pull = [a, id](Tape& t, const Matrix& g) {
        const Matrix& v = t.at(id).value;
        t.at(a).grad += g.cwiseProduct(Matrix::Ones(v.rows(), v.cols()) - v.cwiseProduct(v));
    };
    return id;
}

NodeId Tape::mul_scalar(NodeId a, NodeId s) {
    require_dims(at(s).value.size() == 1, "mul_scalar: scalar operand");
    double sv = at(s).value(0, 0);
    return push(at(a).value * sv, [a, s](Tape& t, const Matrix& g) {
        t.at(a).grad += t.at(s).value(0, 0) * g;
        t.at(s).grad(0, 0) += g.cwiseProduct(t.at(a).value).sum();
    });
}

NodeId Tape::cmul_colvec(NodeId a, NodeId c) {
    const Matrix& va = at(a).value;
    const Matrix& vc = at(c).value;
    require_dims(vc.cols() == 1 && vc.rows() == va.rows(), "cmul_colvec");
    Matrix v = va.array().colwise() * vc.col(0).array();
    return push(std::move(v), [a, c](Tape& t, const Matrix& g) {
        const Matrix& va = t.at(a).value;
        const Matrix& vc = t.at(c).value;
        t.at(a).grad += (g.array().colwise() * vc.col(0).array()).matrix();
        t.at(c).grad.col(0) += g.cwiseProduct(va).rowwise().sum();
    });
}

NodeId Tape::add_rowvec(NodeId a, NodeId r) {
    const Matrix& va = at(a).value;
    const Matrix& vr = at(r).value;
    require_dims(vr.rows() == 1 && vr.cols() == va.cols(), "add_rowvec");
    Matrix v = va.rowwise() + vr.row(0);
    return push(std::move(v), [a, r](Tape& t, const Matrix& g) {
        t.at(a).grad += g;
        t.at(r).grad.row(0) += g.colwise().sum();
    });
}

NodeId Tape::concat_cols(std::span<const NodeId> parts) {
    if (parts.empty()) throw UsageError("concat_cols: no operands");
    Index rows = at(parts[0]).value.rows();
    Index cols = 0;
    for (NodeId p : parts) {
        require_dims(at(p).value.rows() == rows, "concat_cols");
        cols += at(p).value.cols();
    }
    Matrix v(rows, cols);
    Index off = 0;
    std::vector<NodeId> ids(parts.begin(), parts.end());
    std::vector<Index> offsets;
    for (NodeId p : parts) {
        Index w = at(p).value.cols();
        v.middleCols(off, w) = at(p).value;
        offsets.push_back(off);
        off += w;
    }
    return push(std::move(v), [ids, offsets](Tape& t, const Matrix& g) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            Index w = t.at(ids[i]).value.cols();
            t.at(ids[i]).grad += g.middleCols(offsets[i], w);
        }
    });
}

NodeId Tape::gather_rows(NodeId a, std::vector<Index> rows) {
    const Matrix& va = at(a).value;
    for (Index r : rows)
        if (r < 0 || r >= va.rows()) throw RequestError("gather_rows: index out of range");
    Matrix v(static_cast<Index>(rows.size()), va.cols());
    for (std::size_t p = 0; p < rows.size(); ++p) v.row(static_cast<Index>(p)) = va.row(rows[p]);
    return push(std::move(v), [a, rows = std::move(rows)](Tape& t, const Matrix& g) {
        Matrix& ga = t.at(a).grad;
        for (std::size_t p = 0; p < rows.size(); ++p)
            ga.row(rows[p]) += g.row(static_cast<Index>(p));
    });
}

NodeId Tape::repeat_rows(NodeId a, int times) {
    if (times < 1) throw UsageError("repeat_rows: times must be >= 1");
    const Matrix& va = at(a).value;
    Matrix v(va.rows() * times, va.cols());
    for (Index i = 0; i < va.rows(); ++i)
        for (int k = 0; k < times; ++k) v.row(i * times + k) = va.row(i);
    return push(std::move(v), [a, times](Tape& t, const Matrix& g) {
        Matrix& ga = t.at(a).grad;
        for (Index i = 0; i < ga.rows(); ++i)
            for (int k = 0; k < times; ++k) ga.row(i) += g.row(i * times + k);
    });
}

NodeId Tape::col(NodeId a, Index j) {
    const Matrix& va = at(a).value;
    if (j < 0 || j >= va.cols()) throw RequestError("col: index out of range");
    return push(va.col(j), [a, j](Tape& t, const Matrix& g) { t.at(a).grad.col(j) += g.col(0); });
}

NodeId Tape::rowwise_sum(NodeId a) {
    Matrix v = at(a).value.rowwise().sum();
    return push(std::move(v), [a](Tape& t, const Matrix& g) {
        t.at(a).grad.array().colwise() += g.col(0).array();
    });
}

NodeId Tape::colwise_mean(NodeId a) {
    const Matrix& va = at(a).value;
    if (va.rows() == 0) throw UsageError("colwise_mean: empty input");
    Matrix v = va.colwise().mean();
    double inv = 1.0 / static_cast<double>(va.rows());
    return push(std::move(v), [a, inv](Tape& t, const Matrix& g) {
        t.at(a).grad.array().rowwise() += inv * g.row(0).array();
    });
}

NodeId Tape::reduce_sum(NodeId a) {
    Matrix v(1, 1);
    v(0, 0) = at(a).value.sum();
    return push(std::move(v),
                [a](Tape& t, const Matrix& g) { t.at(a).grad.array() += g(0, 0); });
}

NodeId Tape::softmax_rows(NodeId a) {
    const Matrix& x = at(a).value;
    Matrix v(x.rows(), x.cols());
    for (Index r = 0; r < x.rows(); ++r) {
        double mx = x.row(r).maxCoeff();
        Eigen::ArrayXd e = (x.row(r).array() - mx).exp();
        v.row(r) = (e / e.sum()).matrix();
    }
    NodeId id = push(std::move(v), nullptr);
    at(id).pull = [a, id](Tape& t, const Matrix& g) {
        const Matrix& v = t.at(id).value;
        Matrix& ga = t.at(a).grad;
        for (Index r = 0; r < v.rows(); ++r) {
            double dot = g.row(r).cwiseProduct(v.row(r)).sum();
            ga.row(r) += (v.row(r).array() * (g.row(r).array() - dot)).matrix();
        }
    };
    return id;
}

NodeId Tape::spline_basis(NodeId a, const SplineGrid& grid) {
    const Matrix& x = at(a).value;
    const int nb = grid.basis_count();
    Matrix v(x.rows(), x.cols() * nb);
    Matrix der(x.rows(), x.cols() * nb);
    std::vector<double> val(static_cast<std::size_t>(nb)), dv(static_cast<std::size_t>(nb));
    for (Index r = 0; r < x.rows(); ++r) {
        for (Index i = 0; i < x.cols(); ++i) {
            grid.basis_and_derivative(x(r, i), val.data(), dv.data());
            for (int k = 0; k < nb; ++k) {
                v(r, i * nb + k) = val[static_cast<std::size_t>(k)];
                der(r, i * nb + k) = dv[static_cast<std::size_t>(k)];
            }
        }
    }
    return push(std::move(v), [a, nb, der = std::move(der)](Tape& t, const Matrix& g) {
        Matrix& ga = t.at(a).grad;
        for (Index r = 0; r < ga.rows(); ++r)
            for (Index i = 0; i < ga.cols(); ++i)
                ga(r, i) += g.row(r).segment(i * nb, nb).cwiseProduct(der.row(r).segment(i * nb, nb)).sum();
    });
}

NodeId Tape::bce_loss(NodeId probs, const Matrix& labels) {
    const Matrix& p = at(probs).value;
    if (p.size() == 0) throw UsageError("bce_loss: empty batch");
    require_dims(p.cols() == 1 && labels.cols() == 1 && labels.rows() == p.rows(), "bce_loss");
    for (Index r = 0; r < labels.rows(); ++r)
        if (labels(r, 0) != 0.0 && labels(r, 0) != 1.0)
            throw UsageError("bce_loss: labels must be 0 or 1");
    const double n = static_cast<double>(p.rows());
    double acc = 0.0;
    for (Index r = 0; r < p.rows(); ++r) {
        double pc = std::min(std::max(p(r, 0), kProbEps), 1.0 - kProbEps);
        double y = labels(r, 0);
        acc -= y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
    }
    Matrix v(1, 1);
    v(0, 0) = acc / n;
    return push(std::move(v), [probs, labels, n](Tape& t, const Matrix& g) {
        const Matrix& p = t.at(probs).value;
        Matrix& gp = t.at(probs).grad;
        for (Index r = 0; r < p.rows(); ++r) {
            double pc = std::min(std::max(p(r, 0), kProbEps), 1.0 - kProbEps);
            double y = labels(r, 0);
            gp(r, 0) += g(0, 0) * (pc - y) / (pc * (1.0 - pc)) / n;
        }
    });
}

double Tape::scalar(NodeId id) const {
    const Matrix& v = at(id).value;
    require_dims(v.size() == 1, "scalar");
    return v(0, 0);
}

void Tape::backward(NodeId loss) {
    if (nodes_.empty()) throw UsageError("backward before forward");
    Node& l = at(loss);
    require_dims(l.value.size() == 1, "backward: loss must be scalar");

    for (ParamTensor* p : bound_) p->zero_grad();
    for (Node& n : nodes_) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    l.grad(0, 0) = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        Node& n = nodes_[i];
        if (n.pull) n.pull(*this, n.grad);
    }
}

} // namespace mgkan
