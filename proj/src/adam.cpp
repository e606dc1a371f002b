#include "mgkan/adam.hpp"

#include <cmath>

namespace mgkan {

void AdamOptimizer::step(std::span<ParamTensor* const> params) {
    ++t_;
    const double corr1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (ParamTensor* p : params) {
        Moments& mo = moments_[p];
        if (mo.m.size() == 0) {
            mo.m = Matrix::Zero(p->value.rows(), p->value.cols());
            mo.v = Matrix::Zero(p->value.rows(), p->value.cols());
        }
        mo.m = cfg_.beta1 * mo.m + (1.0 - cfg_.beta1) * p->grad;
        mo.v = cfg_.beta2 * mo.v + (1.0 - cfg_.beta2) * p->grad.cwiseProduct(p->grad);
        Matrix m_hat = mo.m / corr1;
        Matrix v_hat = mo.v / corr2;
        p->value -= cfg_.lr * (m_hat.array() / (v_hat.array().sqrt() + cfg_.eps)).matrix();
        p->zero_grad();
    }
}

} // namespace mgkan
