#include "mgkan/train.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "mgkan/errors.hpp"
#include "mgkan/fusion.hpp"
#include "mgkan/rng.hpp"
#include "mgkan/views.hpp"

namespace mgkan {

namespace {

struct LabeledPairs {
    std::vector<Edge> pairs;
    Matrix labels;     // n x 1 in {0,1}
    std::vector<int> label_ints;
};

LabeledPairs concat_pos_neg(const std::vector<Edge>& pos, const std::vector<Edge>& neg) {
    LabeledPairs out;
    out.pairs.reserve(pos.size() + neg.size());
    out.pairs.insert(out.pairs.end(), pos.begin(), pos.end());
    out.pairs.insert(out.pairs.end(), neg.begin(), neg.end());
    out.labels = Matrix::Zero(static_cast<Index>(out.pairs.size()), 1);
    out.labels.topRows(static_cast<Index>(pos.size())).setOnes();
    out.label_ints.assign(pos.size(), 1);
    out.label_ints.insert(out.label_ints.end(), neg.size(), 0);
    return out;
}

std::vector<double> to_std(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

} // namespace

FoldArtifacts train_fold(const Dataset& data, const FoldSplit& fold, const ModelConfig& mcfg,
                         const TrainOptions& opts) {
    const DrugGraph& graph = data.graph;

    DrugGraph train_graph;
    train_graph.n_drugs = graph.n_drugs;
    train_graph.drug_ids = graph.drug_ids;
    train_graph.edges = fold.train_pos;

    ViewOptions vopts;
    vopts.smoothing = opts.smoothing;
    vopts.symmetrize = mcfg.symmetric_control;
    ViewSet views = build_views(train_graph, data.has_features ? &data.features : nullptr, vopts);
    views.verify_no_leak(fold.val_pos);
    views.verify_no_leak(fold.test_pos);

    Matrix x;
    const Matrix* x_ptr = nullptr;
    if (data.has_features) {
        x = data.features.to_matrix();
        x_ptr = &x;
    }
    Model model(mcfg, graph.n_drugs, x_ptr, mix_seed(opts.seed, static_cast<std::uint64_t>(fold.fold), 0xA1ULL));

    LabeledPairs train = concat_pos_neg(fold.train_pos, fold.train_neg);
    LabeledPairs val = concat_pos_neg(fold.val_pos, fold.val_neg);
    const bool can_early_stop = !fold.val_pos.empty() && !fold.val_neg.empty();

    AdamOptimizer adam(opts.adam);
    std::vector<Matrix> best_snapshot = model.snapshot();
    double best_val = -1.0;
    int best_epoch = 0;
    int epochs_run = 0;

    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        if (opts.resample_negatives && epoch > 1) {
            std::vector<Edge> excl = fold.val_neg;
            excl.insert(excl.end(), fold.test_neg.begin(), fold.test_neg.end());
            std::vector<Edge> neg =
                sample_negatives(graph, fold.train_pos.size(),
                                 mix_seed(fold.seed, 1000 + static_cast<std::uint64_t>(epoch)),
                                 excl);
            train = concat_pos_neg(fold.train_pos, neg);
        }

        Tape tape;
        NodeId loss = model.loss(tape, views, train.pairs, train.labels);
        double loss_value = tape.scalar(loss);
        if (!std::isfinite(loss_value))
            throw TrainError("fold " + std::to_string(fold.fold) + " epoch " +
                             std::to_string(epoch) + ": loss is not finite");
        model.zero_grads();
        tape.backward(loss);
        adam.step(model.params());
        epochs_run = epoch;

        if (can_early_stop) {
            Model::Frozen frozen = model.embed_frozen(views);
            Vector scores = score_pairs(frozen.s, frozen.t, frozen.m, val.pairs);
            std::vector<double> sv = to_std(scores);
            double val_auroc = auroc(sv, val.label_ints);
            if (val_auroc > best_val) {
                best_val = val_auroc;
                best_epoch = epoch;
                best_snapshot = model.snapshot();
            } else if (epoch - best_epoch >= opts.patience) {
                break;
            }
        } else {
            best_snapshot = model.snapshot();
        }
        if (!opts.quiet && epoch % 20 == 0)
            std::cerr << "[fold " << fold.fold << "] epoch " << epoch << " loss " << loss_value
                      << " val_auroc " << best_val << "\n";
    }

    model.restore(best_snapshot);

    FoldArtifacts art;
    art.report.fold = fold.fold;
    art.report.best_val_auroc = best_val;
    art.report.epochs_run = epochs_run;
    art.best_params = std::move(best_snapshot);

    Model::Frozen frozen = model.embed_frozen(views);

    // Task 1: specific-direction prediction on the held-out test pairs.
    LabeledPairs test = concat_pos_neg(fold.test_pos, fold.test_neg);
    art.task1_pairs = test.pairs;
    art.task1_scores = to_std(score_pairs(frozen.s, frozen.t, frozen.m, test.pairs));
    art.task1_labels = test.label_ints;
    art.report.task1.auroc = auroc(art.task1_scores, art.task1_labels);
    art.report.task1.auprc = auprc(art.task1_scores, art.task1_labels);
    ThresholdMetrics tm = threshold_metrics(art.task1_scores, art.task1_labels, opts.tau);
    art.report.task1.acc = tm.acc;
    art.report.task1.f1 = tm.f1;

    // Task 2: three-way direction classification.
    art.task2 = build_task2_instances(graph, fold);
    if (!art.task2.instances.empty()) {
        std::vector<Edge> fwd_pairs, bwd_pairs;
        std::vector<bool> lex;
        for (const Task2Instance& inst : art.task2.instances) {
            fwd_pairs.emplace_back(inst.a, inst.b);
            bwd_pairs.emplace_back(inst.b, inst.a);
            lex.push_back(graph.drug_ids[static_cast<std::size_t>(inst.a)] <
                          graph.drug_ids[static_cast<std::size_t>(inst.b)]);
        }
        art.task2_p_ab = to_std(score_pairs(frozen.s, frozen.t, frozen.m, fwd_pairs));
        art.task2_p_ba = to_std(score_pairs(frozen.s, frozen.t, frozen.m, bwd_pairs));
        Task2Metrics t2 =
            evaluate_task2(art.task2.instances, art.task2_p_ab, art.task2_p_ba, lex, opts.tau);
        art.report.task2.auroc = t2.auroc;
        art.report.task2.auprc = t2.auprc;
        art.report.task2.acc = t2.acc;
        art.report.task2.f1 = t2.macro_f1;
        art.report.task2.dir_acc = t2.dir_acc;
    }
    return art;
}

EvalReport cross_validate(const Dataset& data, const std::vector<FoldSplit>& folds,
                          const ModelConfig& mcfg, const TrainOptions& opts,
                          std::vector<FoldArtifacts>* artifacts) {
    auto start = std::chrono::steady_clock::now();
    EvalReport report;
    report.seed = opts.seed;
    for (const FoldSplit& fold : folds) {
        FoldArtifacts art = train_fold(data, fold, mcfg, opts);
        report.folds.push_back(art.report);
        if (artifacts) artifacts->push_back(std::move(art));
    }
    report.aggregate();
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace mgkan
