#include "mgkan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "mgkan/errors.hpp"

namespace mgkan {

double auroc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw UsageError("auroc: size mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels) (l != 0 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw MetricError("auroc: needs both classes");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied groups, then the Mann-Whitney U statistic.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // 1-based
        for (std::size_t t = i; t < j; ++t)
            if (labels[idx[t]] != 0) pos_rank_sum += avg_rank;
        i = j;
    }
    double u = pos_rank_sum - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw UsageError("auprc: size mismatch");
    std::size_t n_pos = 0;
    for (int l : labels)
        if (l != 0) ++n_pos;
    if (n_pos == 0) throw MetricError("auprc: needs at least one positive");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (labels[idx[i]] != 0) {
            ++hits;
            ap += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return ap / static_cast<double>(n_pos);
}

ThresholdMetrics threshold_metrics(std::span<const double> scores, std::span<const int> labels,
                                   double tau) {
    if (scores.empty() || scores.size() != labels.size())
        throw UsageError("threshold_metrics: empty or mismatched input");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] >= tau;
        bool truth = labels[i] != 0;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
        else ++tn;
    }
    ThresholdMetrics m;
    m.acc = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
    double denom = static_cast<double>(2 * tp + fp + fn);
    m.f1 = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
    return m;
}

Task2Label classify_task2(double p_ab, double p_ba, double tau, bool a_lex_smaller, int* ties) {
    if (std::max(p_ab, p_ba) < tau) return Task2Label::None;
    if (p_ab > p_ba) return Task2Label::AtoB;
    if (p_ba > p_ab) return Task2Label::BtoA;
    if (ties) ++(*ties);
    return a_lex_smaller ? Task2Label::AtoB : Task2Label::BtoA;
}

Task2Metrics evaluate_task2(const std::vector<Task2Instance>& instances,
                            std::span<const double> p_ab, std::span<const double> p_ba,
                            const std::vector<bool>& a_lex_smaller, double tau) {
    if (instances.empty()) throw UsageError("evaluate_task2: no instances");
    if (p_ab.size() != instances.size() || p_ba.size() != instances.size() ||
        a_lex_smaller.size() != instances.size())
        throw UsageError("evaluate_task2: size mismatch");

    Task2Metrics out;
    long conf[3][3] = {};
    std::vector<double> exist_scores;
    std::vector<int> exist_labels;
    std::size_t directed = 0, directed_hit = 0;

    for (std::size_t i = 0; i < instances.size(); ++i) {
        Task2Label truth = instances[i].label;
        Task2Label pred = classify_task2(p_ab[i], p_ba[i], tau, a_lex_smaller[i], &out.ties);
        conf[static_cast<int>(truth)][static_cast<int>(pred)]++;
        if (truth != Task2Label::None) {
            ++directed;
            if (pred == truth) ++directed_hit;
        }
        exist_scores.push_back(std::max(p_ab[i], p_ba[i]));
        exist_labels.push_back(truth != Task2Label::None ? 1 : 0);
    }

    long total = 0, correct = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            total += conf[r][c];
            if (r == c) correct += conf[r][c];
        }
    out.acc = static_cast<double>(correct) / static_cast<double>(total);

    double f1_sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        long tp = conf[c][c];
        long fn = 0, fp = 0;
        for (int o = 0; o < 3; ++o)
            if (o != c) {
                fn += conf[c][o];
                fp += conf[o][c];
            }
        double denom = static_cast<double>(2 * tp + fp + fn);
        f1_sum += denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
    }
    out.macro_f1 = f1_sum / 3.0;
    out.dir_acc = directed == 0
                      ? 0.0
                      : static_cast<double>(directed_hit) / static_cast<double>(directed);

    bool both = false;
    for (std::size_t i = 1; i < exist_labels.size(); ++i)
        if (exist_labels[i] != exist_labels[0]) both = true;
    if (both) {
        out.auroc = auroc(exist_scores, exist_labels);
        out.auprc = auprc(exist_scores, exist_labels);
    }
    return out;
}

std::vector<RankedPrediction> rank_unknown_pairs(const Matrix& s, const Matrix& t,
                                                 const Matrix& m, const EdgeKeySet& known,
                                                 Index n, std::int64_t k) {
    require_dims(s.rows() == n && t.rows() == n, "rank_unknown_pairs: embedding rows");
    const std::int64_t unknown =
        static_cast<std::int64_t>(n) * (n - 1) - static_cast<std::int64_t>(known.size());
    if (k > unknown) throw RequestError("rank_unknown_pairs: K exceeds unknown pair count");
    if (k <= 0) return {};

    auto better = [](const RankedPrediction& a, const RankedPrediction& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.source != b.source) return a.source < b.source;
        return a.target < b.target;
    };

    std::vector<RankedPrediction> best;
    best.reserve(static_cast<std::size_t>(4 * k));
    for (Index u = 0; u < n; ++u) {
        // One row batch at a time keeps memory at O(n).
        Vector logits = t * (s.row(u) * m).transpose();
        for (Index v = 0; v < n; ++v) {
            if (v == u || known.contains(u, v)) continue;
            double l = logits(v);
            double p = l >= 0.0 ? 1.0 / (1.0 + std::exp(-l)) : std::exp(l) / (1.0 + std::exp(l));
            best.push_back(RankedPrediction{u, v, p});
        }
        if (static_cast<std::int64_t>(best.size()) > 8 * k) {
            std::sort(best.begin(), best.end(), better);
            best.resize(static_cast<std::size_t>(std::min<std::int64_t>(
                k, static_cast<std::int64_t>(best.size()))));
        }
    }
    std::sort(best.begin(), best.end(), better);
    if (static_cast<std::int64_t>(best.size()) > k) best.resize(static_cast<std::size_t>(k));
    return best;
}

namespace {

std::string fmt_metric(double v) {
    if (v < 0.0) return "-";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void accumulate(TaskMetrics& mean, TaskMetrics& stdev, const std::vector<TaskMetrics>& xs) {
    auto stat = [&](auto get, double& mu, double& sd) {
        double s = 0.0;
        for (const TaskMetrics& x : xs) s += get(x);
        mu = s / static_cast<double>(xs.size());
        double v = 0.0;
        for (const TaskMetrics& x : xs) v += (get(x) - mu) * (get(x) - mu);
        sd = std::sqrt(v / static_cast<double>(xs.size()));
    };
    stat([](const TaskMetrics& x) { return x.auroc; }, mean.auroc, stdev.auroc);
    stat([](const TaskMetrics& x) { return x.auprc; }, mean.auprc, stdev.auprc);
    stat([](const TaskMetrics& x) { return x.acc; }, mean.acc, stdev.acc);
    stat([](const TaskMetrics& x) { return x.f1; }, mean.f1, stdev.f1);
    bool has_dir = true;
    for (const TaskMetrics& x : xs)
        if (x.dir_acc < 0.0) has_dir = false;
    if (has_dir) {
        stat([](const TaskMetrics& x) { return x.dir_acc; }, mean.dir_acc, stdev.dir_acc);
    } else {
        mean.dir_acc = -1.0;
        stdev.dir_acc = -1.0;
    }
}

} // namespace

void EvalReport::aggregate() {
    if (folds.empty()) throw UsageError("EvalReport: no folds");
    std::vector<TaskMetrics> t1, t2;
    for (const FoldReport& f : folds) {
        t1.push_back(f.task1);
        t2.push_back(f.task2);
    }
    accumulate(task1_mean, task1_std, t1);
    accumulate(task2_mean, task2_std, t2);
}

std::string EvalReport::to_tsv() const {
    std::ostringstream os;
    os << "# ablation=" << ablation_tag << "\n";
    os << "# seed=" << seed << "\n";
    os << "# runtime_seconds=" << runtime_seconds << "\n";
    os << "task\tfold\tauroc\tauprc\tacc\tf1\tdir_acc\n";
    auto row = [&](int task, const std::string& fold, const TaskMetrics& m) {
        os << task << '\t' << fold << '\t' << fmt_metric(m.auroc) << '\t' << fmt_metric(m.auprc)
           << '\t' << fmt_metric(m.acc) << '\t' << fmt_metric(m.f1) << '\t'
           << fmt_metric(m.dir_acc) << '\n';
    };
    for (const FoldReport& f : folds) row(1, std::to_string(f.fold), f.task1);
    row(1, "mean", task1_mean);
    row(1, "std", task1_std);
    for (const FoldReport& f : folds) row(2, std::to_string(f.fold), f.task2);
    row(2, "mean", task2_mean);
    row(2, "std", task2_std);
    return os.str();
}

std::string EvalReport::to_table() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    auto pct = [&](double v) { return v < 0.0 ? std::string("   -  ") : [&] {
        std::ostringstream o;
        o << std::fixed << std::setprecision(4) << v;
        return o.str();
    }(); };
    os << "model=" << ablation_tag << " seed=" << seed << " runtime=" << std::setprecision(1)
       << runtime_seconds << "s\n"
       << std::setprecision(4);
    os << "task  fold   AUROC   AUPRC   ACC     F1      dir_acc\n";
    auto row = [&](int task, const std::string& fold, const TaskMetrics& m) {
        os << task << "     " << fold;
        for (std::size_t i = fold.size(); i < 6; ++i) os << ' ';
        os << ' ' << pct(m.auroc) << "  " << pct(m.auprc) << "  " << pct(m.acc) << "  "
           << pct(m.f1) << "  " << pct(m.dir_acc) << '\n';
    };
    for (const FoldReport& f : folds) row(1, std::to_string(f.fold), f.task1);
    row(1, "mean", task1_mean);
    row(1, "std", task1_std);
    for (const FoldReport& f : folds) row(2, std::to_string(f.fold), f.task2);
    row(2, "mean", task2_mean);
    row(2, "std", task2_std);
    return os.str();
}

} // namespace mgkan
