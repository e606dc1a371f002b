#include "mgkan/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "mgkan/errors.hpp"
#include "mgkan/matrix.hpp"
#include "mgkan/rng.hpp"

namespace mgkan {

SyntheticData make_planted_benchmark(const SyntheticConfig& cfg) {
    const Index n = cfg.n_drugs;
    const int d = cfg.latent_dim;
    if (n < 2 || d < 1) throw ConfigError("synthetic: invalid size");
    const std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1);
    if (cfg.target_edges < 1 || cfg.target_edges > max_edges)
        throw ConfigError("synthetic: target_edges out of range");

    Rng rng(mix_seed(cfg.seed, 0x5e11ULL));

    Matrix latent(n, d);
    for (Index r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) latent(r, c) = gaussian(rng);

    Matrix bilinear(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) bilinear(r, c) = gaussian(rng);

    // Quantile threshold over all ordered pair scores.
    Matrix pair_scores = latent * bilinear * latent.transpose();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(max_edges));
    for (Index u = 0; u < n; ++u)
        for (Index v = 0; v < n; ++v)
            if (u != v) flat.push_back(pair_scores(u, v));
    std::nth_element(flat.begin(), flat.begin() + (cfg.target_edges - 1), flat.end(),
                     std::greater<double>());
    const double threshold = flat[static_cast<std::size_t>(cfg.target_edges - 1)];

    SyntheticData data;
    data.graph.n_drugs = n;
    data.graph.drug_ids.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "SD%04lld", static_cast<long long>(i));
        data.graph.drug_ids.emplace_back(buf);
    }
    for (Index u = 0; u < n; ++u)
        for (Index v = 0; v < n; ++v)
            if (u != v && pair_scores(u, v) >= threshold)
                data.graph.edges.emplace_back(u, v);

    // Binary observations: sign of random projections of the latents.
    data.features = FeatureTable(n, cfg.family_dims);
    for (int f = 0; f < 3; ++f) {
        auto fam = static_cast<FeatureFamily>(f);
        const Index m = cfg.family_dims[static_cast<std::size_t>(f)];
        Matrix proj(d, m);
        for (int r = 0; r < d; ++r)
            for (Index c = 0; c < m; ++c) proj(r, c) = gaussian(rng);
        Matrix z = latent * proj;
        for (Index u = 0; u < n; ++u)
            for (Index c = 0; c < m; ++c)
                if (z(u, c) > 0.0) data.features.set(fam, u, c);
    }

    data.graph.validate();
    return data;
}

} // namespace mgkan
