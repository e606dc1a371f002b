#include "mgkan/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgkan/checkpoint.hpp"
#include "mgkan/config.hpp"
#include "mgkan/data.hpp"
#include "mgkan/errors.hpp"
#include "mgkan/fusion.hpp"
#include "mgkan/metrics.hpp"
#include "mgkan/rng.hpp"
#include "mgkan/train.hpp"
#include "mgkan/views.hpp"

namespace mgkan::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path);
    out << content;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

/// Registers every config key as an identically named flag.
void bind_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--edge_file", cfg.edge_file, "edge list TSV (source<TAB>target)");
    cmd->add_option("--feature_file", cfg.feature_file,
                    "feature TSV (drug<TAB>family<TAB>item)");
    cmd->add_option("--output_dir", cfg.output_dir, "output directory");
    cmd->add_option("--hidden_dim", cfg.hidden_dim, "embedding width per view");
    cmd->add_option("--layers", cfg.layers, "encoder depth per view");
    cmd->add_option("--grid_size", cfg.grid_size, "spline grid intervals");
    cmd->add_option("--spline_order", cfg.spline_order, "spline polynomial degree");
    cmd->add_option("--spline_min", cfg.spline_min, "spline domain lower bound");
    cmd->add_option("--spline_max", cfg.spline_max, "spline domain upper bound");
    cmd->add_option("--input_scale", cfg.input_scale, "fixed scale on layer inputs");
    cmd->add_option("--embedding_dim", cfg.embedding_dim,
                    "free-embedding width when features are absent");
    cmd->add_option("--attention_mode", cfg.attention_mode, "per_view or per_drug");
    cmd->add_option("--epochs", cfg.epochs, "max training epochs");
    cmd->add_option("--lr", cfg.lr, "Adam learning rate");
    cmd->add_option("--beta1", cfg.beta1, "Adam beta1");
    cmd->add_option("--beta2", cfg.beta2, "Adam beta2");
    cmd->add_option("--eps", cfg.eps, "Adam epsilon");
    cmd->add_option("--patience", cfg.patience, "early-stopping patience (epochs)");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--folds", cfg.folds, "cross-validation folds");
    cmd->add_option("--train_ratio", cfg.train_ratio, "train split ratio");
    cmd->add_option("--val_ratio", cfg.val_ratio, "validation split ratio");
    cmd->add_option("--test_ratio", cfg.test_ratio, "test split ratio");
    cmd->add_option("--tau", cfg.tau, "decision threshold");
    cmd->add_option("--neg_mode", cfg.neg_mode, "per_fold or per_epoch negatives");
    cmd->add_option("--smoothing", cfg.smoothing, "degree-normalization smoothing");
    cmd->add_flag("--no_kan", cfg.no_kan, "replace KAN transforms with affine+SiLU");
    cmd->add_flag("--no_af", cfg.no_af, "drop attention fusion");
    cmd->add_flag("--no_kf", cfg.no_kf, "drop KAN fusion");
    cmd->add_flag("--no_dn", cfg.no_dn, "drop the asymmetric DDI view");
    cmd->add_flag("--no_ci", cfg.no_ci, "drop the co-interaction view");
    cmd->add_flag("--no_sim", cfg.no_sim, "drop the similarity view");
    cmd->add_flag("--symmetric_control", cfg.symmetric_control,
                  "direction-blind control model");
    cmd->add_option("--checkpoint", cfg.checkpoint, "checkpoint path");
    cmd->add_option("--scores", cfg.scores, "persisted scores TSV");
    cmd->add_option("--topk", cfg.topk, "number of ranked pairs");
}

Dataset load_and_prepare(RunConfig& cfg) {
    if (cfg.edge_file.empty()) throw ConfigError("edge_file is required");
    Dataset ds = load_dataset(cfg.edge_file, cfg.feature_file);
    if (!ds.has_features && !cfg.no_sim) {
        std::cerr << "[warn] no feature file: similarity view omitted, free-embedding "
                     "features enabled (no_sim implied)\n";
        cfg.no_sim = true;
    }
    return ds;
}

std::string views_summary_tsv(const std::vector<ViewStats>& stats) {
    std::ostringstream os;
    os << "matrix\trows\tnnz\tdensity\tmean_degree\tmax_entry\n";
    for (const ViewStats& s : stats)
        os << s.name << '\t' << s.rows << '\t' << s.nnz << '\t' << std::setprecision(17)
           << s.density << '\t' << s.mean_degree << '\t' << s.max_entry << '\n';
    return os.str();
}

std::string task1_scores_tsv(const DrugGraph& g, const FoldArtifacts& art) {
    std::ostringstream os;
    os << "# source\ttarget\tscore\tlabel\n";
    for (std::size_t i = 0; i < art.task1_pairs.size(); ++i) {
        const Edge& e = art.task1_pairs[i];
        os << g.drug_ids[static_cast<std::size_t>(e.first)] << '\t'
           << g.drug_ids[static_cast<std::size_t>(e.second)] << '\t' << std::setprecision(17)
           << art.task1_scores[i] << '\t' << art.task1_labels[i] << '\n';
    }
    return os.str();
}

std::string task2_scores_tsv(const DrugGraph& g, const FoldArtifacts& art) {
    std::ostringstream os;
    os << "# drug_a\tdrug_b\tp_ab\tp_ba\tlabel\n";
    const char* names[] = {"a->b", "b->a", "none"};
    for (std::size_t i = 0; i < art.task2.instances.size(); ++i) {
        const Task2Instance& inst = art.task2.instances[i];
        os << g.drug_ids[static_cast<std::size_t>(inst.a)] << '\t'
           << g.drug_ids[static_cast<std::size_t>(inst.b)] << '\t' << std::setprecision(17)
           << art.task2_p_ab[i] << '\t' << art.task2_p_ba[i] << '\t'
           << names[static_cast<int>(inst.label)] << '\n';
    }
    return os.str();
}

int cmd_build_views(RunConfig cfg) {
    cfg.validate();
    Dataset ds = load_and_prepare(cfg);
    ViewOptions vopts;
    vopts.smoothing = cfg.smoothing;
    ViewSet views = build_views(ds.graph, ds.has_features ? &ds.features : nullptr, vopts);
    std::vector<ViewStats> stats = view_stats(views);

    write_text(out_path(cfg, "run_manifest.json"), make_manifest(cfg, "build-views"));
    write_drug_manifest(out_path(cfg, "drug_manifest.tsv"), ds.graph);
    std::string summary = views_summary_tsv(stats);
    write_text(out_path(cfg, "views_summary.tsv"), summary);
    std::cout << "drugs=" << ds.graph.n_drugs << " edges=" << ds.graph.edges.size() << "\n"
              << summary;
    return 0;
}

RunConfig variant_config(const RunConfig& base, const std::string& name) {
    RunConfig v = base;
    if (name == "full") return v;
    if (name == "no_kan") v.no_kan = true;
    else if (name == "no_af") v.no_af = true;
    else if (name == "no_kf") v.no_kf = true;
    else if (name == "no_dn") v.no_dn = true;
    else if (name == "no_ci") v.no_ci = true;
    else if (name == "no_sim") v.no_sim = true;
    else throw ConfigError("unknown ablation variant: " + name);
    return v;
}

TrainOptions train_options(const RunConfig& cfg) {
    TrainOptions opts;
    opts.epochs = cfg.epochs;
    opts.patience = cfg.patience;
    opts.adam = cfg.adam_config();
    opts.tau = cfg.tau;
    opts.smoothing = cfg.smoothing;
    opts.resample_negatives = cfg.neg_mode == "per_epoch";
    opts.seed = cfg.seed;
    return opts;
}

int cmd_train(RunConfig cfg) {
    cfg.validate();
    Dataset ds = load_and_prepare(cfg);
    std::vector<FoldSplit> folds = make_folds(
        ds.graph, cfg.folds, {cfg.train_ratio, cfg.val_ratio, cfg.test_ratio}, cfg.seed);

    const std::string manifest = make_manifest(cfg, "train");
    write_text(out_path(cfg, "run_manifest.json"), manifest);
    write_drug_manifest(out_path(cfg, "drug_manifest.tsv"), ds.graph);
    write_fold_manifest(out_path(cfg, "folds.tsv"), ds.graph, folds);

    std::vector<FoldArtifacts> artifacts;
    EvalReport report = cross_validate(ds, folds, cfg.model_config(), train_options(cfg),
                                       &artifacts);
    report.ablation_tag = "full";
    report.seed = cfg.seed;

    write_text(out_path(cfg, "report.tsv"), report.to_tsv());
    for (const FoldArtifacts& art : artifacts) {
        int f = art.report.fold;
        Matrix x;
        const Matrix* x_ptr = nullptr;
        if (ds.has_features) {
            x = ds.features.to_matrix();
            x_ptr = &x;
        }
        Model model(cfg.model_config(), ds.graph.n_drugs, x_ptr,
                    mix_seed(cfg.seed, static_cast<std::uint64_t>(f), 0xA1ULL));
        model.restore(art.best_params);
        save_checkpoint(out_path(cfg, "checkpoint_fold" + std::to_string(f) + ".bin"), model,
                        manifest);
        write_text(out_path(cfg, "scores_task1_fold" + std::to_string(f) + ".tsv"),
                   task1_scores_tsv(ds.graph, art));
        write_text(out_path(cfg, "scores_task2_fold" + std::to_string(f) + ".tsv"),
                   task2_scores_tsv(ds.graph, art));
    }
    std::cout << report.to_table();
    return 0;
}

int cmd_ablate(RunConfig cfg) {
    cfg.validate();
    Dataset ds = load_and_prepare(cfg);
    std::vector<FoldSplit> folds = make_folds(
        ds.graph, cfg.folds, {cfg.train_ratio, cfg.val_ratio, cfg.test_ratio}, cfg.seed);
    write_text(out_path(cfg, "run_manifest.json"), make_manifest(cfg, "ablate"));
    write_drug_manifest(out_path(cfg, "drug_manifest.tsv"), ds.graph);
    write_fold_manifest(out_path(cfg, "folds.tsv"), ds.graph, folds);

    const std::vector<std::string> variants = {"full",  "no_kan", "no_af", "no_kf",
                                               "no_dn", "no_ci",  "no_sim"};
    std::ostringstream tsv;
    tsv << "variant\ttask\tauroc_mean\tauroc_std\tauprc_mean\tauprc_std\tacc_mean\tacc_std\t"
           "f1_mean\tf1_std\tdir_acc_mean\tdir_acc_std\n";
    std::ostringstream table;
    table << "variant   task1_AUROC  task1_AUPRC  task1_ACC  task1_F1   task2_ACC  task2_dir\n";
    for (const std::string& name : variants) {
        RunConfig vcfg = variant_config(cfg, name);
        if (name == "no_sim" && !ds.has_features) {
            // Already implied; still reported as its own row.
        }
        EvalReport rep = cross_validate(ds, folds, vcfg.model_config(), train_options(vcfg));
        rep.ablation_tag = name;
        rep.seed = cfg.seed;
        write_text(out_path(cfg, "report_" + name + ".tsv"), rep.to_tsv());
        auto line = [&](int task, const TaskMetrics& m, const TaskMetrics& s) {
            tsv << name << '\t' << task << '\t' << std::setprecision(17) << m.auroc << '\t'
                << s.auroc << '\t' << m.auprc << '\t' << s.auprc << '\t' << m.acc << '\t'
                << s.acc << '\t' << m.f1 << '\t' << s.f1 << '\t' << m.dir_acc << '\t'
                << s.dir_acc << '\n';
        };
        line(1, rep.task1_mean, rep.task1_std);
        line(2, rep.task2_mean, rep.task2_std);
        table << std::left << std::setw(10) << name << std::right << std::fixed
              << std::setprecision(4) << std::setw(11) << rep.task1_mean.auroc << "  "
              << std::setw(11) << rep.task1_mean.auprc << "  " << std::setw(9)
              << rep.task1_mean.acc << "  " << std::setw(9) << rep.task1_mean.f1 << "  "
              << std::setw(9) << rep.task2_mean.acc << "  " << std::setw(9)
              << rep.task2_mean.dir_acc << "\n";
    }
    write_text(out_path(cfg, "ablation_report.tsv"), tsv.str());
    std::cout << table.str();
    return 0;
}

int cmd_predict_topk(RunConfig cfg) {
    cfg.validate();
    if (cfg.checkpoint.empty()) throw ConfigError("checkpoint is required");
    Dataset ds = load_and_prepare(cfg);
    Checkpoint ckpt = load_checkpoint(cfg.checkpoint);

    ViewOptions vopts;
    vopts.smoothing = cfg.smoothing;
    vopts.symmetrize = cfg.symmetric_control;
    ViewSet views = build_views(ds.graph, ds.has_features ? &ds.features : nullptr, vopts);

    Matrix x;
    const Matrix* x_ptr = nullptr;
    if (ds.has_features) {
        x = ds.features.to_matrix();
        x_ptr = &x;
    }
    Model model(cfg.model_config(), ds.graph.n_drugs, x_ptr, cfg.seed);
    apply_checkpoint(ckpt, model);

    Model::Frozen frozen = model.embed_frozen(views);
    EdgeKeySet known(ds.graph.n_drugs, ds.graph.edges);
    std::vector<RankedPrediction> top =
        rank_unknown_pairs(frozen.s, frozen.t, frozen.m, known, ds.graph.n_drugs, cfg.topk);

    write_text(out_path(cfg, "run_manifest.json"), make_manifest(cfg, "predict-topk"));
    std::ostringstream os;
    os << "# rank\tsource\ttarget\tscore\n";
    for (std::size_t i = 0; i < top.size(); ++i)
        os << (i + 1) << '\t' << ds.graph.drug_ids[static_cast<std::size_t>(top[i].source)]
           << '\t' << ds.graph.drug_ids[static_cast<std::size_t>(top[i].target)] << '\t'
           << std::setprecision(17) << top[i].score << '\n';
    write_text(out_path(cfg, "predictions.tsv"), os.str());
    std::cout << os.str();
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    if (cfg.scores.empty()) throw ConfigError("scores file is required");
    std::ifstream in(cfg.scores);
    if (!in) throw ParseError("cannot open scores file: " + cfg.scores);
    std::vector<double> scores;
    std::vector<int> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ls, f, '\t')) fields.push_back(f);
        std::size_t si, li;
        if (fields.size() == 2) {
            si = 0;
            li = 1;
        } else if (fields.size() == 4) {
            si = 2;
            li = 3;
        } else {
            throw ParseError(cfg.scores + ":" + std::to_string(lineno) +
                             ": expected 2 or 4 tab-separated fields");
        }
        try {
            scores.push_back(std::stod(fields[si]));
            labels.push_back(std::stoi(fields[li]));
        } catch (const std::exception&) {
            throw ParseError(cfg.scores + ":" + std::to_string(lineno) + ": bad number");
        }
    }
    if (scores.empty()) throw ParseError(cfg.scores + ": no score rows");
    ThresholdMetrics tm = threshold_metrics(scores, labels, cfg.tau);
    std::cout << "auroc\tauprc\tacc\tf1\n"
              << std::setprecision(17) << auroc(scores, labels) << '\t' << auprc(scores, labels)
              << '\t' << tm.acc << '\t' << tm.f1 << '\n';
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    RunConfig cfg;
    if (const char* env = std::getenv("MGKAN_OUTPUT_DIR")) cfg.output_dir = env;

    try {
        // Config file first, so explicit flags win.
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                cfg.apply(parse_config_file(argv[i + 1]));
            } else if (arg.rfind("--config=", 0) == 0) {
                cfg.apply(parse_config_file(arg.substr(9)));
            }
        }

        CLI::App app{"multi-view graph KAN for asymmetric drug-drug interaction prediction"};
        app.require_subcommand(1);
        std::string config_path;

        CLI::App* build = app.add_subcommand("build-views", "construct the network views");
        CLI::App* train = app.add_subcommand("train", "cross-validated training + evaluation");
        CLI::App* ablate = app.add_subcommand("ablate", "full model plus the six ablations");
        CLI::App* topk = app.add_subcommand("predict-topk", "rank unknown pairs");
        CLI::App* eval = app.add_subcommand("evaluate", "metrics from persisted scores");
        for (CLI::App* cmd : {build, train, ablate, topk, eval})
            bind_options(cmd, cfg, config_path);

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        if (build->parsed()) return cmd_build_views(cfg);
        if (train->parsed()) return cmd_train(cfg);
        if (ablate->parsed()) return cmd_ablate(cfg);
        if (topk->parsed()) return cmd_predict_topk(cfg);
        if (eval->parsed()) return cmd_evaluate(cfg);
        return 2;
    } catch (const CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const TrainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace mgkan::cli
