#ifndef MGKAN_SPLINE_HPP
#define MGKAN_SPLINE_HPP

#include <vector>

namespace mgkan {

/// Uniform B-spline grid over a bounded domain.
///
/// The knot vector is extended `order` steps beyond each side of the
/// domain, so the `intervals + order` basis functions form a partition
/// of unity on [g_min, g_max]. Inputs are clamped to the domain before
/// evaluation.
class SplineGrid {
public:
    SplineGrid(double g_min, double g_max, int intervals, int order);

    double g_min() const { return g_min_; }
    double g_max() const { return g_max_; }
    int intervals() const { return intervals_; }
    int order() const { return order_; }
    int basis_count() const { return intervals_ + order_; }
    const std::vector<double>& knots() const { return knots_; }

    double clamp(double x) const;

    /// Writes the basis_count() values B_j(clamp(x)) into out.
    /// Only order+1 of them are nonzero.
    void basis(double x, double* out) const;

    /// Same as basis(), also writing d/dx B_j(clamp(x)) into der.
    /// The derivative is zero for x strictly outside the domain.
    void basis_and_derivative(double x, double* out, double* der) const;

private:
    int interval_of(double x) const;

    double g_min_;
    double g_max_;
    int intervals_;
    int order_;
    double step_;
    std::vector<double> knots_; // intervals + 2*order + 1 entries
};

} // namespace mgkan

#endif // MGKAN_SPLINE_HPP
