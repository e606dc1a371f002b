#ifndef MGKAN_VIEWS_HPP
#define MGKAN_VIEWS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mgkan/graph.hpp"
#include "mgkan/matrix.hpp"

namespace mgkan {

/// The five degree-normalized propagation matrices, plus the raw
/// matrices they were built from. Construction consumes training-split
/// edges only; instances are immutable after construction.
struct ViewSet {
    // Raw (unnormalized) matrices.
    SpMatrix a_out_raw, a_in_raw;
    SpMatrix c_in_raw, c_out_raw;
    SpMatrix b_raw;

    // Degree-normalized propagation matrices.
    SpMatrix a_out, a_in;
    SpMatrix c_out, c_in;
    SpMatrix b_sim;

    bool has_similarity = false;
    bool symmetrized = false;
    double smoothing = 1e-8;

    /// Leakage guard: every held-out edge must be absent from the raw
    /// training adjacency. Throws ConfigError on a violation.
    void verify_no_leak(const std::vector<Edge>& held_out) const;
};

struct ViewOptions {
    double smoothing = 1e-8;
    /// Collapse direction: both adjacency roles become the undirected
    /// adjacency and both co-interaction roles its (identical) kernel.
    bool symmetrize = false;
};

/// A_out[u][v] = 1 iff <u,v> is an edge; A_in is its transpose.
std::pair<SpMatrix, SpMatrix> build_adjacency(const DrugGraph& graph);

/// Degree-weighted second-order kernels of a binary adjacency:
///   C_in(i,j)  = sum_k A(k,i) A(k,j) / outdeg(k)
///   C_out(i,j) = sum_k A(i,k) A(j,k) / indeg(k)
/// Zero-degree terms are skipped; diagonals are zeroed.
std::pair<SpMatrix, SpMatrix> build_co_interaction(const SpMatrix& a);

/// Sum of the per-family Jaccard similarity matrices (targets, enzymes,
/// transporters), with the diagonal zeroed. Entries lie in [0, 3].
SpMatrix build_similarity(const FeatureTable& features);

/// Scales every entry (i,j) by 1/sqrt((rowsum_i + eps)(colsum_j + eps)).
/// Requires non-negative input; zero rows and columns stay zero.
SpMatrix normalize(const SpMatrix& m, double smoothing = 1e-8);

/// Builds all views from the given (training) graph. Pass features as
/// nullptr to omit the similarity view.
ViewSet build_views(const DrugGraph& train_graph, const FeatureTable* features,
                    const ViewOptions& opts = {});

struct ViewStats {
    std::string name;
    Index rows = 0;
    Index nnz = 0;
    double density = 0.0;
    double mean_degree = 0.0; // mean nonzeros per row
    double max_entry = 0.0;
};

std::vector<ViewStats> view_stats(const ViewSet& views);

} // namespace mgkan

#endif // MGKAN_VIEWS_HPP
