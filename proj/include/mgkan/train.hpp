#ifndef MGKAN_TRAIN_HPP
#define MGKAN_TRAIN_HPP

#include <vector>

#include "mgkan/adam.hpp"
#include "mgkan/data.hpp"
#include "mgkan/metrics.hpp"
#include "mgkan/model.hpp"

namespace mgkan {

struct TrainOptions {
    int epochs = 500;
    int patience = 30; // early stopping on validation AUROC
    AdamConfig adam{};
    double tau = 0.5;
    double smoothing = 1e-8;
    bool resample_negatives = false; // fresh training negatives per epoch
    std::uint64_t seed = 42;
    bool quiet = true;
};

/// Everything a fold produces besides its metric row.
struct FoldArtifacts {
    FoldReport report;
    std::vector<Edge> task1_pairs;
    std::vector<double> task1_scores;
    std::vector<int> task1_labels;
    Task2Set task2;
    std::vector<double> task2_p_ab, task2_p_ba;
    std::vector<Matrix> best_params; // registry-order snapshot
};

/// Trains one fold end to end: views from the fold's train positives,
/// Adam on the BCE objective, early stopping on validation AUROC, then
/// Task 1 and Task 2 evaluation on the fold's test split.
/// Throws TrainError when the loss turns non-finite.
FoldArtifacts train_fold(const Dataset& data, const FoldSplit& fold, const ModelConfig& mcfg,
                         const TrainOptions& opts);

/// Runs every fold and aggregates the report. Artifacts are appended to
/// *artifacts when given (one entry per fold, in fold order).
EvalReport cross_validate(const Dataset& data, const std::vector<FoldSplit>& folds,
                          const ModelConfig& mcfg, const TrainOptions& opts,
                          std::vector<FoldArtifacts>* artifacts = nullptr);

} // namespace mgkan

#endif // MGKAN_TRAIN_HPP
