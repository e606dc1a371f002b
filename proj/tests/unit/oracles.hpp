// Test-only reference implementations, kept independent of the
// production kernels they check.
#ifndef MGKAN_TESTS_ORACLES_HPP
#define MGKAN_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "mgkan/kan.hpp"
#include "mgkan/matrix.hpp"
#include "mgkan/spline.hpp"
#include "mgkan/tape.hpp"

namespace oracle {

using mgkan::Index;
using mgkan::Matrix;

// Cox-de Boor recursion straight from the definition.
inline double bspline_naive(const std::vector<double>& t, int j, int k, double x) {
    if (k == 0) {
        // Right-closed top interval so the domain endpoint belongs to a basis.
        bool last = static_cast<std::size_t>(j + 1) == t.size() - 1;
        if (last) return (x >= t[static_cast<std::size_t>(j)] && x <= t[static_cast<std::size_t>(j + 1)]) ? 1.0 : 0.0;
        return (x >= t[static_cast<std::size_t>(j)] && x < t[static_cast<std::size_t>(j + 1)]) ? 1.0 : 0.0;
    }
    double left = 0.0, right = 0.0;
    double dl = t[static_cast<std::size_t>(j + k)] - t[static_cast<std::size_t>(j)];
    double dr = t[static_cast<std::size_t>(j + k + 1)] - t[static_cast<std::size_t>(j + 1)];
    if (dl > 0.0) left = (x - t[static_cast<std::size_t>(j)]) / dl * bspline_naive(t, j, k - 1, x);
    if (dr > 0.0)
        right = (t[static_cast<std::size_t>(j + k + 1)] - x) / dr * bspline_naive(t, j + 1, k - 1, x);
    return left + right;
}

inline std::vector<double> bspline_basis_naive(const mgkan::SplineGrid& grid, double x) {
    double xc = std::min(std::max(x, grid.g_min()), grid.g_max());
    std::vector<double> out(static_cast<std::size_t>(grid.basis_count()));
    for (int j = 0; j < grid.basis_count(); ++j)
        out[static_cast<std::size_t>(j)] = bspline_naive(grid.knots(), j, grid.order(), xc);
    // The right-closed convention above only fires at the knot-vector end;
    // inside the domain the recursion matches the production kernel.
    return out;
}

inline Matrix dense_matmul(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j)
            for (Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
    return c;
}

inline Matrix dense_normalize(const Matrix& m, double eps) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0.0) continue;
            double r = m.row(i).sum();
            double c = m.col(j).sum();
            out(i, j) = m(i, j) / std::sqrt((r + eps) * (c + eps));
        }
    return out;
}

// Triple loop over the co-neighbor definition, diagonals zeroed.
inline std::pair<Matrix, Matrix> co_interaction_naive(const Matrix& a) {
    const Index n = a.rows();
    Matrix cin = Matrix::Zero(n, n), cout = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            for (Index k = 0; k < n; ++k) {
                double outdeg = a.row(k).sum();
                double indeg = a.col(k).sum();
                if (outdeg > 0.0) cin(i, j) += a(k, i) * a(k, j) / outdeg;
                if (indeg > 0.0) cout(i, j) += a(i, k) * a(j, k) / indeg;
            }
        }
    return {cin, cout};
}

inline double jaccard_sets(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t inter = 0, uni = 0;
    std::vector<int> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    uni = all.size();
    for (int x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) ++inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double auroc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 0) continue;
        ++n_pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (int l : labels)
        if (l == 0) ++n_neg;
    return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Average precision recomputed with fresh counting per positive (O(n^2)),
// same stable-descending tie order as the production metric.
inline double ap_reference(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double ap = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (labels[idx[i]] == 0) continue;
        ++n_pos;
        std::size_t hits = 0;
        for (std::size_t j = 0; j <= i; ++j)
            if (labels[idx[j]] != 0) ++hits;
        ap += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return ap / static_cast<double>(n_pos);
}

// Spline-mode KAN transform recomposed from the naive basis recursion
// and scalar arithmetic.
inline Matrix kan_transform_ref(const Matrix& x, const mgkan::KanTransform& t,
                                const mgkan::SplineGrid& g) {
    const int k = g.basis_count();
    auto silu = [](double v) { return v / (1.0 + std::exp(-v)); };
    Matrix out = Matrix::Zero(x.rows(), t.d_out);
    for (Index r = 0; r < x.rows(); ++r)
        for (int o = 0; o < t.d_out; ++o)
            for (int i = 0; i < t.d_in; ++i) {
                std::vector<double> basis = bspline_basis_naive(g, x(r, i));
                double spline = 0.0;
                for (int b = 0; b < k; ++b)
                    spline += t.coeff->value(i * k + b, o) * basis[static_cast<std::size_t>(b)];
                out(r, o) += t.wb->value(i, o) * silu(x(r, i)) + t.ws->value(i, o) * spline;
            }
    return out;
}

inline double rel_error(double analytic, double numeric, double abs_floor = 1e-8) {
    double diff = std::abs(analytic - numeric);
    double denom = std::max(std::abs(analytic), std::abs(numeric));
    if (denom < abs_floor) return 0.0; // both effectively zero
    return diff / denom;
}

// Central finite differences over every entry of every parameter.
// loss() must recompute the forward pass from current parameter values;
// analytic gradients are read from the tensors' grad accumulators.
inline double max_fd_rel_error(const std::vector<mgkan::ParamTensor*>& params,
                               const std::function<double()>& loss, double h = 1e-5,
                               double abs_floor = 1e-8) {
    double worst = 0.0;
    for (mgkan::ParamTensor* p : params) {
        for (Index r = 0; r < p->value.rows(); ++r)
            for (Index c = 0; c < p->value.cols(); ++c) {
                double saved = p->value(r, c);
                p->value(r, c) = saved + h;
                double up = loss();
                p->value(r, c) = saved - h;
                double down = loss();
                p->value(r, c) = saved;
                double numeric = (up - down) / (2.0 * h);
                worst = std::max(worst, rel_error(p->grad(r, c), numeric, abs_floor));
            }
    }
    return worst;
}

} // namespace oracle

#endif // MGKAN_TESTS_ORACLES_HPP
