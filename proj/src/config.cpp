#include "mgkan/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgkan/errors.hpp"

namespace mgkan {

void RunConfig::validate() const {
    if (hidden_dim < 1) throw ConfigError("config: hidden_dim must be positive");
    if (layers < 1) throw ConfigError("config: layers must be positive");
    if (grid_size < 1) throw ConfigError("config: grid_size must be positive");
    if (spline_order < 0) throw ConfigError("config: spline_order must be non-negative");
    if (!(spline_min < spline_max)) throw ConfigError("config: empty spline domain");
    if (input_scale <= 0.0) throw ConfigError("config: input_scale must be positive");
    if (embedding_dim < 1) throw ConfigError("config: embedding_dim must be positive");
    if (attention_mode != "per_view" && attention_mode != "per_drug")
        throw ConfigError("config: attention_mode must be per_view or per_drug");
    if (epochs < 0) throw ConfigError("config: epochs must be non-negative");
    if (lr <= 0.0) throw ConfigError("config: lr must be positive");
    if (patience < 1) throw ConfigError("config: patience must be positive");
    if (folds < 1) throw ConfigError("config: folds must be positive");
    double sum = train_ratio + val_ratio + test_ratio;
    if (std::abs(sum - 1.0) > 1e-9 || train_ratio < 0 || val_ratio < 0 || test_ratio < 0)
        throw ConfigError("config: split ratios must be non-negative and sum to 1");
    if (tau < 0.0 || tau > 1.0) throw ConfigError("config: tau must lie in [0,1]");
    if (neg_mode != "per_fold" && neg_mode != "per_epoch")
        throw ConfigError("config: neg_mode must be per_fold or per_epoch");
    if (smoothing < 0.0) throw ConfigError("config: smoothing must be non-negative");
    if (no_af && no_kf)
        throw ConfigError("config: no_af and no_kf together leave nothing to decode");
    if (topk < 0) throw ConfigError("config: topk must be non-negative");
}

ModelConfig RunConfig::model_config() const {
    ModelConfig m;
    m.hidden_dim = hidden_dim;
    m.layers = layers;
    m.grid_size = grid_size;
    m.spline_order = spline_order;
    m.spline_min = spline_min;
    m.spline_max = spline_max;
    m.input_scale = input_scale;
    m.embedding_dim = embedding_dim;
    m.per_drug_attention = attention_mode == "per_drug";
    m.no_kan = no_kan;
    m.no_af = no_af;
    m.no_kf = no_kf;
    m.no_dn = no_dn;
    m.no_ci = no_ci;
    m.no_sim = no_sim;
    m.symmetric_control = symmetric_control;
    return m;
}

AdamConfig RunConfig::adam_config() const {
    AdamConfig a;
    a.lr = lr;
    a.beta1 = beta1;
    a.beta2 = beta2;
    a.eps = eps;
    return a;
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config: invalid boolean for " + key + ": " + v);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: invalid number for " + key + ": " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: invalid integer for " + key + ": " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (const std::exception&) {
        throw ConfigError("config: invalid integer for " + key + ": " + v);
    }
}

} // namespace

std::map<std::string, std::string> RunConfig::to_map() const {
    std::map<std::string, std::string> m;
    m["edge_file"] = edge_file;
    m["feature_file"] = feature_file;
    m["output_dir"] = output_dir;
    m["hidden_dim"] = std::to_string(hidden_dim);
    m["layers"] = std::to_string(layers);
    m["grid_size"] = std::to_string(grid_size);
    m["spline_order"] = std::to_string(spline_order);
    m["spline_min"] = fmt_double(spline_min);
    m["spline_max"] = fmt_double(spline_max);
    m["input_scale"] = fmt_double(input_scale);
    m["embedding_dim"] = std::to_string(embedding_dim);
    m["attention_mode"] = attention_mode;
    m["epochs"] = std::to_string(epochs);
    m["lr"] = fmt_double(lr);
    m["beta1"] = fmt_double(beta1);
    m["beta2"] = fmt_double(beta2);
    m["eps"] = fmt_double(eps);
    m["patience"] = std::to_string(patience);
    m["seed"] = std::to_string(seed);
    m["folds"] = std::to_string(folds);
    m["train_ratio"] = fmt_double(train_ratio);
    m["val_ratio"] = fmt_double(val_ratio);
    m["test_ratio"] = fmt_double(test_ratio);
    m["tau"] = fmt_double(tau);
    m["neg_mode"] = neg_mode;
    m["smoothing"] = fmt_double(smoothing);
    m["no_kan"] = no_kan ? "1" : "0";
    m["no_af"] = no_af ? "1" : "0";
    m["no_kf"] = no_kf ? "1" : "0";
    m["no_dn"] = no_dn ? "1" : "0";
    m["no_ci"] = no_ci ? "1" : "0";
    m["no_sim"] = no_sim ? "1" : "0";
    m["symmetric_control"] = symmetric_control ? "1" : "0";
    m["checkpoint"] = checkpoint;
    m["scores"] = scores;
    m["topk"] = std::to_string(topk);
    return m;
}

void RunConfig::apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, v] : kv) {
        if (key == "edge_file") edge_file = v;
        else if (key == "feature_file") feature_file = v;
        else if (key == "output_dir") output_dir = v;
        else if (key == "hidden_dim") hidden_dim = parse_int(key, v);
        else if (key == "layers") layers = parse_int(key, v);
        else if (key == "grid_size") grid_size = parse_int(key, v);
        else if (key == "spline_order") spline_order = parse_int(key, v);
        else if (key == "spline_min") spline_min = parse_double(key, v);
        else if (key == "spline_max") spline_max = parse_double(key, v);
        else if (key == "input_scale") input_scale = parse_double(key, v);
        else if (key == "embedding_dim") embedding_dim = parse_int(key, v);
        else if (key == "attention_mode") attention_mode = v;
        else if (key == "epochs") epochs = parse_int(key, v);
        else if (key == "lr") lr = parse_double(key, v);
        else if (key == "beta1") beta1 = parse_double(key, v);
        else if (key == "beta2") beta2 = parse_double(key, v);
        else if (key == "eps") eps = parse_double(key, v);
        else if (key == "patience") patience = parse_int(key, v);
        else if (key == "seed") seed = parse_u64(key, v);
        else if (key == "folds") folds = parse_int(key, v);
        else if (key == "train_ratio") train_ratio = parse_double(key, v);
        else if (key == "val_ratio") val_ratio = parse_double(key, v);
        else if (key == "test_ratio") test_ratio = parse_double(key, v);
        else if (key == "tau") tau = parse_double(key, v);
        else if (key == "neg_mode") neg_mode = v;
        else if (key == "smoothing") smoothing = parse_double(key, v);
        else if (key == "no_kan") no_kan = parse_bool(key, v);
        else if (key == "no_af") no_af = parse_bool(key, v);
        else if (key == "no_kf") no_kf = parse_bool(key, v);
        else if (key == "no_dn") no_dn = parse_bool(key, v);
        else if (key == "no_ci") no_ci = parse_bool(key, v);
        else if (key == "no_sim") no_sim = parse_bool(key, v);
        else if (key == "symmetric_control") symmetric_control = parse_bool(key, v);
        else if (key == "checkpoint") checkpoint = v;
        else if (key == "scores") scores = v;
        else if (key == "topk") topk = parse_int(key, v);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t");
            std::size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string make_manifest(const RunConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = cfg.to_map();
    j["seed"] = cfg.seed;
    nlohmann::json hashes = nlohmann::json::object();
    if (!cfg.edge_file.empty()) hashes["edge_file"] = file_hash(cfg.edge_file);
    if (!cfg.feature_file.empty()) hashes["feature_file"] = file_hash(cfg.feature_file);
    j["data_hashes"] = hashes;
    return j.dump(2);
}

} // namespace mgkan
