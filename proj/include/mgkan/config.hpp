#ifndef MGKAN_CONFIG_HPP
#define MGKAN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

#include "mgkan/adam.hpp"
#include "mgkan/model.hpp"

namespace mgkan {

/// Resolved run configuration. Every field maps to one key in the flat
/// key=value config file and to one identically named CLI flag.
struct RunConfig {
    // Paths.
    std::string edge_file;
    std::string feature_file;
    std::string output_dir = "."; // MGKAN_OUTPUT_DIR overrides this default

    // Model.
    int hidden_dim = 64;
    int layers = 2;
    int grid_size = 5;
    int spline_order = 3;
    double spline_min = -1.0;
    double spline_max = 1.0;
    double input_scale = 1.0;
    int embedding_dim = 64;
    std::string attention_mode = "per_view"; // or per_drug

    // Training.
    int epochs = 500;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int patience = 30;
    std::uint64_t seed = 42;

    // Protocol.
    int folds = 5;
    double train_ratio = 0.8;
    double val_ratio = 0.1;
    double test_ratio = 0.1;
    double tau = 0.5;
    std::string neg_mode = "per_fold"; // or per_epoch
    double smoothing = 1e-8;

    // Ablations and controls.
    bool no_kan = false;
    bool no_af = false;
    bool no_kf = false;
    bool no_dn = false;
    bool no_ci = false;
    bool no_sim = false;
    bool symmetric_control = false;

    // Subcommand extras.
    std::string checkpoint;
    std::string scores;
    int topk = 10;

    void validate() const;
    ModelConfig model_config() const;
    AdamConfig adam_config() const;

    /// Flat key=value view of every field (the manifest content).
    std::map<std::string, std::string> to_map() const;
    /// Applies `key=value` overrides; unknown keys are an error.
    void apply(const std::map<std::string, std::string>& kv);
};

/// Reads a flat key=value file ('#' comments, blank lines allowed).
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// FNV-1a over the file bytes, as a hex string; used in run manifests.
std::string file_hash(const std::string& path);

/// JSON run manifest: resolved config, seed and input hashes.
std::string make_manifest(const RunConfig& cfg, const std::string& command);

} // namespace mgkan

#endif // MGKAN_CONFIG_HPP
