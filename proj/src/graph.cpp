#include "mgkan/graph.hpp"

#include <bit>
#include <unordered_set>

#include "mgkan/errors.hpp"

namespace mgkan {

void DrugGraph::validate() const {
    if (!drug_ids.empty() && static_cast<Index>(drug_ids.size()) != n_drugs)
        throw ConfigError("graph: drug id list does not match n_drugs");
    std::unordered_set<std::int64_t> seen;
    for (const Edge& e : edges) {
        if (e.first < 0 || e.first >= n_drugs || e.second < 0 || e.second >= n_drugs)
            throw ConfigError("graph: edge index out of range");
        if (e.first == e.second) throw ConfigError("graph: self-loop");
        if (!seen.insert(static_cast<std::int64_t>(e.first) * n_drugs + e.second).second)
            throw ConfigError("graph: duplicate edge");
    }
}

FeatureTable::FeatureTable(Index n_drugs, std::array<Index, 3> family_dims)
    : n_drugs_(n_drugs), dims_(family_dims) {
    for (int f = 0; f < 3; ++f) {
        if (dims_[f] < 0) throw ConfigError("feature table: negative family dimension");
        bits_[f].assign(static_cast<std::size_t>(n_drugs_ * words_per_row(f)), 0);
    }
}

void FeatureTable::set(FeatureFamily fam, Index drug, Index item) {
    int f = static_cast<int>(fam);
    if (drug < 0 || drug >= n_drugs_ || item < 0 || item >= dims_[f])
        throw ConfigError("feature table: index out of range");
    bits_[f][static_cast<std::size_t>(drug * words_per_row(f) + item / 64)] |=
        1ULL << (item % 64);
}

bool FeatureTable::get(FeatureFamily fam, Index drug, Index item) const {
    int f = static_cast<int>(fam);
    return (bits_[f][static_cast<std::size_t>(drug * words_per_row(f) + item / 64)] >>
            (item % 64)) &
           1ULL;
}

Index FeatureTable::popcount(FeatureFamily fam, Index drug) const {
    int f = static_cast<int>(fam);
    Index w = words_per_row(f);
    Index total = 0;
    for (Index i = 0; i < w; ++i)
        total += std::popcount(bits_[f][static_cast<std::size_t>(drug * w + i)]);
    return total;
}

Index FeatureTable::intersection_count(FeatureFamily fam, Index a, Index b) const {
    int f = static_cast<int>(fam);
    Index w = words_per_row(f);
    Index total = 0;
    for (Index i = 0; i < w; ++i)
        total += std::popcount(bits_[f][static_cast<std::size_t>(a * w + i)] &
                               bits_[f][static_cast<std::size_t>(b * w + i)]);
    return total;
}

double FeatureTable::jaccard(FeatureFamily fam, Index a, Index b) const {
    Index inter = intersection_count(fam, a, b);
    Index uni = popcount(fam, a) + popcount(fam, b) - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Matrix FeatureTable::to_matrix() const {
    Matrix x = Matrix::Zero(n_drugs_, total_dim());
    Index offset = 0;
    for (int f = 0; f < 3; ++f) {
        auto fam = static_cast<FeatureFamily>(f);
        for (Index d = 0; d < n_drugs_; ++d)
            for (Index i = 0; i < dims_[f]; ++i)
                if (get(fam, d, i)) x(d, offset + i) = 1.0;
        offset += dims_[f];
    }
    return x;
}

} // namespace mgkan
