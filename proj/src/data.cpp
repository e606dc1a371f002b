#include "mgkan/data.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mgkan/errors.hpp"
#include "mgkan/rng.hpp"

namespace mgkan {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool skip_line(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t') continue;
        return c == '#';
    }
    return true; // blank
}

std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return line;
}

} // namespace

Dataset load_dataset(const std::string& edge_file, const std::string& feature_file) {
    Dataset ds;
    std::unordered_map<std::string, Index> drug_index;
    auto intern = [&](const std::string& id) -> Index {
        auto [it, inserted] = drug_index.emplace(id, static_cast<Index>(ds.graph.drug_ids.size()));
        if (inserted) ds.graph.drug_ids.push_back(id);
        return it->second;
    };

    std::ifstream in(edge_file);
    if (!in) throw ParseError("cannot open edge file: " + edge_file);
    std::string line;
    int lineno = 0;
    std::unordered_set<std::string> seen_edges;
    for (; std::getline(in, line); ) {
        ++lineno;
        line = chomp(line);
        if (skip_line(line)) continue;
        std::vector<std::string> f = split_tabs(line);
        if (f.size() != 2 || f[0].empty() || f[1].empty())
            throw ParseError(edge_file + ":" + std::to_string(lineno) +
                             ": expected source_id<TAB>target_id");
        if (f[0] == f[1])
            throw ParseError(edge_file + ":" + std::to_string(lineno) + ": self-loop edge");
        if (!seen_edges.insert(f[0] + "\t" + f[1]).second) {
            ++ds.duplicate_edges;
            std::cerr << "[warn] " << edge_file << ":" << lineno << ": duplicate edge dropped\n";
            continue;
        }
        Index u = intern(f[0]);
        Index v = intern(f[1]);
        ds.graph.edges.emplace_back(u, v);
    }

    if (!feature_file.empty()) {
        std::ifstream fin(feature_file);
        if (!fin) throw ParseError("cannot open feature file: " + feature_file);
        struct Triple {
            Index drug;
            int family;
            Index item;
        };
        std::vector<Triple> triples;
        std::array<std::unordered_map<std::string, Index>, 3> item_index;
        lineno = 0;
        while (std::getline(fin, line)) {
            ++lineno;
            line = chomp(line);
            if (skip_line(line)) continue;
            std::vector<std::string> f = split_tabs(line);
            if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty())
                throw ParseError(feature_file + ":" + std::to_string(lineno) +
                                 ": expected drug_id<TAB>family<TAB>item_id");
            int family = -1;
            for (int i = 0; i < 3; ++i)
                if (f[1] == kFamilyNames[static_cast<std::size_t>(i)]) family = i;
            if (family < 0)
                throw ParseError(feature_file + ":" + std::to_string(lineno) +
                                 ": unknown feature family '" + f[1] + "'");
            Index drug = intern(f[0]);
            auto [it, ins] = item_index[static_cast<std::size_t>(family)].emplace(
                f[2], static_cast<Index>(item_index[static_cast<std::size_t>(family)].size()));
            triples.push_back(Triple{drug, family, it->second});
        }
        ds.graph.n_drugs = static_cast<Index>(ds.graph.drug_ids.size());
        std::array<Index, 3> dims = {
            static_cast<Index>(item_index[0].size()),
            static_cast<Index>(item_index[1].size()),
            static_cast<Index>(item_index[2].size()),
        };
        ds.features = FeatureTable(ds.graph.n_drugs, dims);
        for (const Triple& t : triples)
            ds.features.set(static_cast<FeatureFamily>(t.family), t.drug, t.item);
        ds.has_features = true;
    } else {
        ds.graph.n_drugs = static_cast<Index>(ds.graph.drug_ids.size());
    }
    ds.graph.validate();
    return ds;
}

void write_drug_manifest(const std::string& path, const DrugGraph& graph) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write drug manifest: " + path);
    out << "# drug_id\trow_index\n";
    for (Index i = 0; i < graph.n_drugs; ++i) out << graph.drug_ids[static_cast<std::size_t>(i)] << '\t' << i << '\n';
}

std::vector<FoldSplit> make_folds(const DrugGraph& graph, int k_folds,
                                  std::array<double, 3> ratios, std::uint64_t seed) {
    if (k_folds < 1) throw ConfigError("make_folds: need at least one fold");
    const auto n_edges = static_cast<std::int64_t>(graph.edges.size());
    if (n_edges < k_folds) throw ConfigError("make_folds: fewer edges than folds");
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9 || ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0)
        throw ConfigError("make_folds: split ratios must be non-negative and sum to 1");

    std::vector<FoldSplit> folds;
    for (int f = 0; f < k_folds; ++f) {
        FoldSplit fold;
        fold.fold = f;
        fold.seed = mix_seed(seed, static_cast<std::uint64_t>(f));

        std::vector<Edge> perm = graph.edges;
        Rng rng(mix_seed(fold.seed, 0xF01D5ULL));
        std::shuffle(perm.begin(), perm.end(), rng);

        // Floor the validation/test counts; the remainder goes to train.
        auto n_val = static_cast<std::int64_t>(ratios[1] * static_cast<double>(n_edges));
        auto n_test = static_cast<std::int64_t>(ratios[2] * static_cast<double>(n_edges));
        std::int64_t n_train = n_edges - n_val - n_test;

        fold.train_pos.assign(perm.begin(), perm.begin() + n_train);
        fold.val_pos.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
        fold.test_pos.assign(perm.begin() + n_train + n_val, perm.end());

        fold.train_neg = sample_negatives(graph, fold.train_pos.size(),
                                          mix_seed(fold.seed, 1), {});
        std::vector<Edge> excl = fold.train_neg;
        fold.val_neg = sample_negatives(graph, fold.val_pos.size(), mix_seed(fold.seed, 2), excl);
        excl.insert(excl.end(), fold.val_neg.begin(), fold.val_neg.end());
        fold.test_neg = sample_negatives(graph, fold.test_pos.size(), mix_seed(fold.seed, 3), excl);

        folds.push_back(std::move(fold));
    }
    return folds;
}

std::vector<Edge> sample_negatives(const DrugGraph& graph, std::size_t count,
                                   std::uint64_t seed, const std::vector<Edge>& exclusions) {
    const Index n = graph.n_drugs;
    const auto total = static_cast<std::int64_t>(n) * (n - 1);
    const auto needed = static_cast<std::int64_t>(count) + static_cast<std::int64_t>(exclusions.size());
    if (total - static_cast<std::int64_t>(graph.edges.size()) < needed)
        throw ConfigError("sample_negatives: not enough unknown ordered pairs");
    if (count == 0) return {};

    EdgeKeySet known(n, graph.edges);
    EdgeKeySet used(n, exclusions);
    Rng rng(seed);
    std::vector<Edge> out;
    out.reserve(count);

    // Dense graphs: enumerate the complement instead of rejection sampling.
    const bool enumerate =
        2 * (needed + static_cast<std::int64_t>(graph.edges.size())) > total;
    if (enumerate) {
        std::vector<Edge> candidates;
        for (Index u = 0; u < n; ++u)
            for (Index v = 0; v < n; ++v)
                if (u != v && !known.contains(u, v) && !used.contains(u, v))
                    candidates.emplace_back(u, v);
        if (candidates.size() < count)
            throw ConfigError("sample_negatives: not enough unknown ordered pairs");
        std::shuffle(candidates.begin(), candidates.end(), rng);
        out.assign(candidates.begin(), candidates.begin() + static_cast<std::int64_t>(count));
        return out;
    }

    std::uniform_int_distribution<Index> pick(0, n - 1);
    while (out.size() < count) {
        Index u = pick(rng);
        Index v = pick(rng);
        if (u == v || known.contains(u, v) || used.contains(u, v)) continue;
        used.insert(u, v);
        out.emplace_back(u, v);
    }
    return out;
}

Task2Set build_task2_instances(const DrugGraph& graph, const FoldSplit& fold) {
    const Index n = graph.n_drugs;
    EdgeKeySet known(n, graph.edges);
    Task2Set set;

    for (const Edge& e : fold.test_pos) {
        if (known.contains(e.second, e.first)) {
            ++set.excluded_bidirectional;
            continue;
        }
        Task2Instance inst;
        inst.a = std::min(e.first, e.second);
        inst.b = std::max(e.first, e.second);
        inst.label = (e.first < e.second) ? Task2Label::AtoB : Task2Label::BtoA;
        set.instances.push_back(inst);
    }
    if (set.excluded_bidirectional > 0)
        std::cerr << "[warn] task2: excluded " << set.excluded_bidirectional
                  << " mutually-directed pair(s)\n";

    // Equal number of no-interaction pairs: both directions absent.
    const std::size_t need = set.instances.size();
    std::unordered_set<std::int64_t> used;
    for (const Task2Instance& i : set.instances)
        used.insert(static_cast<std::int64_t>(i.a) * n + i.b);

    Rng rng(mix_seed(fold.seed, 0x7A52ULL));
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::size_t added = 0;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = 200 * static_cast<std::int64_t>(need) + 1000;
    while (added < need && attempts < max_attempts) {
        ++attempts;
        Index u = pick(rng);
        Index v = pick(rng);
        if (u == v) continue;
        Index a = std::min(u, v), b = std::max(u, v);
        if (known.contains(a, b) || known.contains(b, a)) continue;
        if (!used.insert(static_cast<std::int64_t>(a) * n + b).second) continue;
        set.instances.push_back(Task2Instance{a, b, Task2Label::None});
        ++added;
    }
    if (added < need) {
        // Sparse complement: fall back to deterministic enumeration.
        std::vector<Task2Instance> rest;
        for (Index a = 0; a < n; ++a)
            for (Index b = a + 1; b < n; ++b) {
                if (known.contains(a, b) || known.contains(b, a)) continue;
                if (used.count(static_cast<std::int64_t>(a) * n + b)) continue;
                rest.push_back(Task2Instance{a, b, Task2Label::None});
            }
        std::shuffle(rest.begin(), rest.end(), rng);
        for (const Task2Instance& r : rest) {
            if (added >= need) break;
            used.insert(static_cast<std::int64_t>(r.a) * n + r.b);
            set.instances.push_back(r);
            ++added;
        }
        if (added < need)
            throw ConfigError("task2: not enough no-interaction pairs");
    }
    return set;
}

void write_fold_manifest(const std::string& path, const DrugGraph& graph,
                         const std::vector<FoldSplit>& folds) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write fold manifest: " + path);
    out << "# fold\tsplit\tsource\ttarget\tlabel\n";
    auto id = [&](Index i) -> const std::string& { return graph.drug_ids[static_cast<std::size_t>(i)]; };
    auto dump = [&](int fold, const char* split, const std::vector<Edge>& edges, int label) {
        for (const Edge& e : edges)
            out << fold << '\t' << split << '\t' << id(e.first) << '\t' << id(e.second) << '\t'
                << label << '\n';
    };
    for (const FoldSplit& f : folds) {
        dump(f.fold, "train", f.train_pos, 1);
        dump(f.fold, "train", f.train_neg, 0);
        dump(f.fold, "val", f.val_pos, 1);
        dump(f.fold, "val", f.val_neg, 0);
        dump(f.fold, "test", f.test_pos, 1);
        dump(f.fold, "test", f.test_neg, 0);
    }
}

} // namespace mgkan
