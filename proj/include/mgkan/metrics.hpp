#ifndef MGKAN_METRICS_HPP
#define MGKAN_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgkan/data.hpp"
#include "mgkan/graph.hpp"
#include "mgkan/matrix.hpp"

namespace mgkan {

/// Mann-Whitney AUROC: probability that a random positive outranks a
/// random negative, ties counted 0.5. Requires both classes.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// Average precision (step interpolation). Equal scores keep their
/// original order under the stable descending sort. Requires at least
/// one positive.
double auprc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdMetrics {
    double acc = 0.0;
    double f1 = 0.0;
};

/// Accuracy and positive-class F1 at `predicted = score >= tau`.
/// F1 is 0 when there are neither predicted nor true positives.
ThresholdMetrics threshold_metrics(std::span<const double> scores, std::span<const int> labels,
                                   double tau = 0.5);

/// Three-way decision for an unordered pair {a, b} given both direction
/// probabilities. Below tau the pair is classified as no interaction;
/// exact ties go to the direction whose source id is lexicographically
/// smaller (counted in *ties when given).
Task2Label classify_task2(double p_ab, double p_ba, double tau, bool a_lex_smaller,
                          int* ties = nullptr);

struct Task2Metrics {
    double acc = 0.0;      // 3-class accuracy
    double macro_f1 = 0.0; // macro over {a->b, b->a, none}
    double dir_acc = 0.0;  // correct direction among truly directed pairs
    double auroc = 0.0;    // existence: max(p_ab, p_ba) vs label != none
    double auprc = 0.0;
    int ties = 0;
};

/// p_ab[i]/p_ba[i] are the two direction probabilities of instances[i];
/// a_lex_smaller[i] says whether drug a's external id sorts before b's.
Task2Metrics evaluate_task2(const std::vector<Task2Instance>& instances,
                            std::span<const double> p_ab, std::span<const double> p_ba,
                            const std::vector<bool>& a_lex_smaller, double tau = 0.5);

struct RankedPrediction {
    Index source = 0;
    Index target = 0;
    double score = 0.0;
};

/// Scores every ordered pair outside `known` (no self-loops) in
/// row-major batches and returns the top k, ties in enumeration order.
std::vector<RankedPrediction> rank_unknown_pairs(const Matrix& s, const Matrix& t,
                                                 const Matrix& m, const EdgeKeySet& known,
                                                 Index n, std::int64_t k);

struct TaskMetrics {
    double auroc = 0.0, auprc = 0.0, acc = 0.0, f1 = 0.0;
    double dir_acc = -1.0; // < 0 when not applicable (Task 1)
};

struct FoldReport {
    int fold = 0;
    TaskMetrics task1, task2;
    double best_val_auroc = 0.0;
    int epochs_run = 0;
};

struct EvalReport {
    std::string ablation_tag = "full";
    std::uint64_t seed = 0;
    double runtime_seconds = 0.0;
    std::vector<FoldReport> folds;
    TaskMetrics task1_mean, task1_std, task2_mean, task2_std;

    void aggregate();

    /// Metric lines only; runtime and tags go into '#' comments so two
    /// runs with the same seed serialize to identical metric content.
    std::string to_tsv() const;
    std::string to_table() const;
};

} // namespace mgkan

#endif // MGKAN_METRICS_HPP
