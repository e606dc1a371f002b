#include "mgkan/views.hpp"

#include <cmath>

#include "mgkan/errors.hpp"

namespace mgkan {

namespace {

SpMatrix from_triplets(Index rows, Index cols, std::vector<Triplet>& trips) {
    SpMatrix m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

SpMatrix drop_diagonal(const SpMatrix& m) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(m, k); it; ++it)
            if (it.row() != it.col() && it.value() != 0.0)
                trips.emplace_back(it.row(), it.col(), it.value());
    std::vector<Triplet> t = std::move(trips);
    return from_triplets(m.rows(), m.cols(), t);
}

// Binary union of a directed adjacency with its transpose.
SpMatrix symmetrize_binary(const SpMatrix& a) {
    std::vector<Triplet> trips;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(a, k); it; ++it) {
            trips.emplace_back(it.row(), it.col(), 1.0);
            trips.emplace_back(it.col(), it.row(), 1.0);
        }
    SpMatrix s(a.rows(), a.cols());
    s.setFromTriplets(trips.begin(), trips.end(),
                      [](const double&, const double&) { return 1.0; });
    s.makeCompressed();
    return s;
}

} // namespace

void ViewSet::verify_no_leak(const std::vector<Edge>& held_out) const {
    for (const Edge& e : held_out)
        if (a_out_raw.coeff(e.first, e.second) != 0.0)
            throw ConfigError("view leakage: held-out edge present in training adjacency");
}

std::pair<SpMatrix, SpMatrix> build_adjacency(const DrugGraph& graph) {
    std::vector<Triplet> trips;
    trips.reserve(graph.edges.size());
    for (const Edge& e : graph.edges) trips.emplace_back(e.first, e.second, 1.0);
    SpMatrix a_out = from_triplets(graph.n_drugs, graph.n_drugs, trips);
    SpMatrix a_in = a_out.transpose();
    a_in.makeCompressed();
    return {std::move(a_out), std::move(a_in)};
}

std::pair<SpMatrix, SpMatrix> build_co_interaction(const SpMatrix& a) {
    require_dims(a.rows() == a.cols(), "co-interaction: square adjacency");
    const Index n = a.rows();

    Vector outdeg = a * Vector::Ones(n);
    Vector indeg = a.transpose() * Vector::Ones(n);

    // Row-scale by 1/outdeg (zero-degree rows contribute nothing).
    std::vector<Triplet> row_scaled, col_scaled;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(a, k); it; ++it) {
            if (outdeg(it.row()) > 0.0)
                row_scaled.emplace_back(it.row(), it.col(), it.value() / outdeg(it.row()));
            if (indeg(it.col()) > 0.0)
                col_scaled.emplace_back(it.row(), it.col(), it.value() / indeg(it.col()));
        }
    SpMatrix a_row = from_triplets(n, n, row_scaled);
    SpMatrix a_col = from_triplets(n, n, col_scaled);

    SpMatrix c_in = SpMatrix(a.transpose()) * a_row;   // sum_k A(k,i) A(k,j)/outdeg(k)
    SpMatrix c_out = a * SpMatrix(a_col.transpose());  // sum_k A(i,k) A(j,k)/indeg(k)
    return {drop_diagonal(c_in), drop_diagonal(c_out)};
}

SpMatrix build_similarity(const FeatureTable& features) {
    const Index n = features.n_drugs();
    std::vector<Triplet> trips;
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            double s = features.jaccard(FeatureFamily::Target, u, v) +
                       features.jaccard(FeatureFamily::Enzyme, u, v) +
                       features.jaccard(FeatureFamily::Transporter, u, v);
            if (s > 0.0) {
                trips.emplace_back(u, v, s);
                trips.emplace_back(v, u, s);
            }
        }
    }
    return from_triplets(n, n, trips);
}

SpMatrix normalize(const SpMatrix& m, double smoothing) {
    Vector rowsum = Vector::Zero(m.rows());
    Vector colsum = Vector::Zero(m.cols());
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(m, k); it; ++it) {
            if (it.value() < 0.0)
                throw ConfigError("normalize: negative entry");
            rowsum(it.row()) += it.value();
            colsum(it.col()) += it.value();
        }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(m, k); it; ++it) {
            double d = std::sqrt((rowsum(it.row()) + smoothing) * (colsum(it.col()) + smoothing));
            trips.emplace_back(it.row(), it.col(), it.value() / d);
        }
    return from_triplets(m.rows(), m.cols(), trips);
}

ViewSet build_views(const DrugGraph& train_graph, const FeatureTable* features,
                    const ViewOptions& opts) {
    ViewSet v;
    v.smoothing = opts.smoothing;
    v.symmetrized = opts.symmetrize;

    auto [a_out, a_in] = build_adjacency(train_graph);
    v.a_out_raw = std::move(a_out);
    v.a_in_raw = std::move(a_in);

    if (opts.symmetrize) {
        SpMatrix und = symmetrize_binary(v.a_out_raw);
        auto [c_in, c_out] = build_co_interaction(und);
        v.c_in_raw = std::move(c_in);
        v.c_out_raw = std::move(c_out);
        v.a_out = normalize(und, opts.smoothing);
        v.a_in = v.a_out;
        v.c_in = normalize(v.c_in_raw, opts.smoothing);
        v.c_out = v.c_in; // identical for a symmetric adjacency
    } else {
        auto [c_in, c_out] = build_co_interaction(v.a_out_raw);
        v.c_in_raw = std::move(c_in);
        v.c_out_raw = std::move(c_out);
        v.a_out = normalize(v.a_out_raw, opts.smoothing);
        v.a_in = normalize(v.a_in_raw, opts.smoothing);
        v.c_in = normalize(v.c_in_raw, opts.smoothing);
        v.c_out = normalize(v.c_out_raw, opts.smoothing);
    }

    const Index n = train_graph.n_drugs;
    if (features != nullptr) {
        require_dims(features->n_drugs() == n, "views: feature table row count");
        v.b_raw = build_similarity(*features);
        v.b_sim = normalize(v.b_raw, opts.smoothing);
        v.has_similarity = true;
    } else {
        v.b_raw = SpMatrix(n, n);
        v.b_sim = SpMatrix(n, n);
        v.has_similarity = false;
    }
    return v;
}

std::vector<ViewStats> view_stats(const ViewSet& views) {
    auto one = [](const std::string& name, const SpMatrix& m) {
        ViewStats s;
        s.name = name;
        s.rows = m.rows();
        s.nnz = m.nonZeros();
        s.density = m.rows() > 0
                        ? static_cast<double>(m.nonZeros()) /
                              (static_cast<double>(m.rows()) * static_cast<double>(m.cols()))
                        : 0.0;
        s.mean_degree = m.rows() > 0
                            ? static_cast<double>(m.nonZeros()) / static_cast<double>(m.rows())
                            : 0.0;
        s.max_entry = 0.0;
        for (int k = 0; k < m.outerSize(); ++k)
            for (SpMatrix::InnerIterator it(m, k); it; ++it)
                s.max_entry = std::max(s.max_entry, it.value());
        return s;
    };
    std::vector<ViewStats> out;
    out.push_back(one("A_out", views.a_out));
    out.push_back(one("A_in", views.a_in));
    out.push_back(one("C_out", views.c_out));
    out.push_back(one("C_in", views.c_in));
    if (views.has_similarity) out.push_back(one("B", views.b_sim));
    return out;
}

} // namespace mgkan
