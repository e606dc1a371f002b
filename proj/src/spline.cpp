#include "mgkan/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mgkan/errors.hpp"

namespace mgkan {

SplineGrid::SplineGrid(double g_min, double g_max, int intervals, int order)
    : g_min_(g_min), g_max_(g_max), intervals_(intervals), order_(order) {
    if (!(g_min < g_max)) throw ConfigError("spline grid: g_min must be < g_max");
    if (intervals < 1) throw ConfigError("spline grid: need at least one interval");
    if (order < 0) throw ConfigError("spline grid: negative order");
    step_ = (g_max - g_min) / intervals;
    knots_.resize(static_cast<size_t>(intervals + 2 * order + 1));
    for (int j = 0; j < static_cast<int>(knots_.size()); ++j)
        knots_[static_cast<size_t>(j)] = g_min + (j - order) * step_;
}

double SplineGrid::clamp(double x) const {
    if (std::isnan(x)) throw UsageError("spline basis: NaN input");
    return std::min(std::max(x, g_min_), g_max_);
}

// Index m with t_m <= x < t_{m+1}, restricted to the domain intervals
// [order, order + intervals - 1]; x == g_max maps to the last interval.
int SplineGrid::interval_of(double x) const {
    int m = order_ + static_cast<int>(std::floor((x - g_min_) / step_));
    return std::min(std::max(m, order_), order_ + intervals_ - 1);
}

namespace {

// Local Cox-de Boor triangle: writes the degree-d values
// B_{m-d+r, d}(x), r = 0..d into n[0..d].
void local_basis(const std::vector<double>& t, int m, int d, double x, double* n) {
    n[0] = 1.0;
    std::vector<double> left(static_cast<size_t>(d) + 1), right(static_cast<size_t>(d) + 1);
    for (int j = 1; j <= d; ++j) {
        left[static_cast<size_t>(j)] = x - t[static_cast<size_t>(m + 1 - j)];
        right[static_cast<size_t>(j)] = t[static_cast<size_t>(m + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double denom = right[static_cast<size_t>(r + 1)] + left[static_cast<size_t>(j - r)];
            double temp = n[r] / denom;
            n[r] = saved + right[static_cast<size_t>(r + 1)] * temp;
            saved = left[static_cast<size_t>(j - r)] * temp;
        }
        n[j] = saved;
    }
}

} // namespace

void SplineGrid::basis(double x, double* out) const {
    const double xc = clamp(x);
    const int m = interval_of(xc);
    const int k = order_;
    std::fill(out, out + basis_count(), 0.0);
    std::vector<double> n(static_cast<size_t>(k) + 1);
    local_basis(knots_, m, k, xc, n.data());
    for (int r = 0; r <= k; ++r) {
        int j = m - k + r;
        if (j >= 0 && j < basis_count()) out[j] = n[static_cast<size_t>(r)];
    }
}

void SplineGrid::basis_and_derivative(double x, double* out, double* der) const {
    const double xc = clamp(x);
    const int m = interval_of(xc);
    const int k = order_;
    const int nb = basis_count();
    std::fill(out, out + nb, 0.0);
    std::fill(der, der + nb, 0.0);

    std::vector<double> n(static_cast<size_t>(k) + 1);
    local_basis(knots_, m, k, xc, n.data());
    for (int r = 0; r <= k; ++r) {
        int j = m - k + r;
        if (j >= 0 && j < nb) out[j] = n[static_cast<size_t>(r)];
    }

    if (k == 0) return;
    // Clamped inputs are constant outside the domain.
    if (x < g_min_ || x > g_max_) return;

    // B'_{j,k} = k * (B_{j,k-1}/(t_{j+k}-t_j) - B_{j+1,k-1}/(t_{j+k+1}-t_{j+1}))
    std::vector<double> low(static_cast<size_t>(k));
    local_basis(knots_, m, k - 1, xc, low.data());
    auto lower = [&](int j) -> double {
        int r = j - (m - k + 1);
        return (r >= 0 && r <= k - 1) ? low[static_cast<size_t>(r)] : 0.0;
    };
    for (int r = 0; r <= k; ++r) {
        int j = m - k + r;
        if (j < 0 || j >= nb) continue;
        double a = lower(j) / (knots_[static_cast<size_t>(j + k)] - knots_[static_cast<size_t>(j)]);
        double b = lower(j + 1) /
                   (knots_[static_cast<size_t>(j + k + 1)] - knots_[static_cast<size_t>(j + 1)]);
        der[j] = k * (a - b);
    }
}

} // namespace mgkan
