#ifndef MGKAN_SYNTHETIC_HPP
#define MGKAN_SYNTHETIC_HPP

#include <array>
#include <cstdint>

#include "mgkan/data.hpp"
#include "mgkan/graph.hpp"

namespace mgkan {

/// Planted-direction benchmark: drugs carry latent Gaussian features,
/// a fixed random bilinear form scores every ordered pair, and the top
/// pairs by score become directed edges. Observed binary features are
/// thresholded random projections of the latents, so the direction is
/// recoverable but not trivially encoded.
struct SyntheticConfig {
    Index n_drugs = 200;
    int latent_dim = 16;
    std::int64_t target_edges = 2000;
    std::array<Index, 3> family_dims = {32, 24, 16};
    std::uint64_t seed = 7;
};

struct SyntheticData {
    DrugGraph graph;
    FeatureTable features;
};

SyntheticData make_planted_benchmark(const SyntheticConfig& cfg = {});

} // namespace mgkan

#endif // MGKAN_SYNTHETIC_HPP
