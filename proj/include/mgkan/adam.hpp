#ifndef MGKAN_ADAM_HPP
#define MGKAN_ADAM_HPP

#include <cstdint>
#include <span>
#include <unordered_map>

#include "mgkan/tape.hpp"

namespace mgkan {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected Adam. Moments are kept per parameter; step() applies
/// the update from the accumulated gradients and zeroes them.
class AdamOptimizer {
public:
    explicit AdamOptimizer(AdamConfig cfg = {}) : cfg_(cfg) {}

    void step(std::span<ParamTensor* const> params);

    std::int64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    struct Moments {
        Matrix m;
        Matrix v;
    };

    AdamConfig cfg_;
    std::int64_t t_ = 0;
    std::unordered_map<const ParamTensor*, Moments> moments_;
};

} // namespace mgkan

#endif // MGKAN_ADAM_HPP
