#ifndef MGKAN_DATA_HPP
#define MGKAN_DATA_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mgkan/graph.hpp"

namespace mgkan {

struct Dataset {
    DrugGraph graph;
    FeatureTable features;
    bool has_features = false;
    int duplicate_edges = 0; // deduplicated while loading, each one warned
};

/// Loads the TSV edge list (source_id<TAB>target_id) and, when
/// feature_file is non-empty, the TSV feature triples
/// (drug_id<TAB>family<TAB>item_id). Ids are mapped to dense row
/// indices in order of first appearance; drugs that appear only in the
/// feature file are kept as isolated nodes.
Dataset load_dataset(const std::string& edge_file, const std::string& feature_file = "");

/// TSV manifest `drug_id<TAB>row_index`, for reproducibility.
void write_drug_manifest(const std::string& path, const DrugGraph& graph);

/// One transductive fold: disjoint 8:1:1 positive splits plus 1:1
/// negatives per split, all derived from (seed, fold).
struct FoldSplit {
    int fold = 0;
    std::uint64_t seed = 0;
    std::vector<Edge> train_pos, val_pos, test_pos;
    std::vector<Edge> train_neg, val_neg, test_neg;
};

std::vector<FoldSplit> make_folds(const DrugGraph& graph, int k_folds,
                                  std::array<double, 3> ratios, std::uint64_t seed);

/// Uniform sample of `count` ordered pairs outside E, without
/// self-loops, avoiding `exclusions` and internal duplicates.
std::vector<Edge> sample_negatives(const DrugGraph& graph, std::size_t count,
                                   std::uint64_t seed, const std::vector<Edge>& exclusions);

enum class Task2Label : int { AtoB = 0, BtoA = 1, None = 2 };

/// Unordered pair {a, b} with a < b; the label says which direction (if
/// any) is the true interaction.
struct Task2Instance {
    Index a = 0;
    Index b = 0;
    Task2Label label = Task2Label::None;
};

struct Task2Set {
    std::vector<Task2Instance> instances;
    int excluded_bidirectional = 0; // pairs with both directions in E
};

/// Builds Task 2 instances from the fold's held-out test positives and
/// an equal number of sampled no-interaction pairs.
Task2Set build_task2_instances(const DrugGraph& graph, const FoldSplit& fold);

/// TSV `fold<TAB>split<TAB>source<TAB>target<TAB>label` over all folds.
void write_fold_manifest(const std::string& path, const DrugGraph& graph,
                         const std::vector<FoldSplit>& folds);

} // namespace mgkan

#endif // MGKAN_DATA_HPP
