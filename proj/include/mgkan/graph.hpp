#ifndef MGKAN_GRAPH_HPP
#define MGKAN_GRAPH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mgkan/matrix.hpp"

namespace mgkan {

using Edge = std::pair<Index, Index>; // ordered <source, target>

/// Directed interaction graph over an indexed drug vocabulary.
struct DrugGraph {
    Index n_drugs = 0;
    std::vector<Edge> edges;
    std::vector<std::string> drug_ids; // external id per row index

    /// Throws ConfigError on self-loops, duplicates or out-of-range indices.
    void validate() const;
};

/// O(1) membership over ordered pairs.
class EdgeKeySet {
public:
    EdgeKeySet() = default;
    EdgeKeySet(Index n, const std::vector<Edge>& edges) : n_(n) {
        for (const Edge& e : edges) insert(e.first, e.second);
    }

    void insert(Index u, Index v) { keys_.insert(key(u, v)); }
    bool contains(Index u, Index v) const { return keys_.count(key(u, v)) != 0; }
    std::size_t size() const { return keys_.size(); }

private:
    std::int64_t key(Index u, Index v) const {
        return static_cast<std::int64_t>(u) * n_ + v;
    }

    Index n_ = 0;
    std::unordered_set<std::int64_t> keys_;
};

enum class FeatureFamily : int { Target = 0, Enzyme = 1, Transporter = 2 };

constexpr std::array<const char*, 3> kFamilyNames = {"target", "enzyme", "transporter"};

/// Per-drug binary incidence vectors for targets, enzymes and transporters,
/// stored as packed bitsets for fast Jaccard computation.
class FeatureTable {
public:
    FeatureTable() = default;
    FeatureTable(Index n_drugs, std::array<Index, 3> family_dims);

    Index n_drugs() const { return n_drugs_; }
    Index family_dim(FeatureFamily f) const { return dims_[static_cast<int>(f)]; }
    Index total_dim() const { return dims_[0] + dims_[1] + dims_[2]; }

    void set(FeatureFamily f, Index drug, Index item);
    bool get(FeatureFamily f, Index drug, Index item) const;

    Index popcount(FeatureFamily f, Index drug) const;
    Index intersection_count(FeatureFamily f, Index a, Index b) const;

    /// |a ∩ b| / |a ∪ b|; zero when both vectors are empty.
    double jaccard(FeatureFamily f, Index a, Index b) const;

    /// Column-wise concatenation of the three binary families (N x total_dim).
    Matrix to_matrix() const;

private:
    Index words_per_row(int f) const { return (dims_[f] + 63) / 64; }

    Index n_drugs_ = 0;
    std::array<Index, 3> dims_ = {0, 0, 0};
    std::array<std::vector<std::uint64_t>, 3> bits_;
};

} // namespace mgkan

#endif // MGKAN_GRAPH_HPP
