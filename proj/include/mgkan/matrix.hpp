#ifndef MGKAN_MATRIX_HPP
#define MGKAN_MATRIX_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <string>

#include "mgkan/errors.hpp"

namespace mgkan {

// Double precision throughout; gradient acceptance depends on it.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Index = Eigen::Index;

inline void require_dims(bool ok, const std::string& what) {
    if (!ok) throw DimensionError("dimension mismatch: " + what);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline bool all_finite(const SpMatrix& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMatrix::InnerIterator it(m, k); it; ++it)
            if (!std::isfinite(it.value())) return false;
    return true;
}

/// Dense copy of a sparse matrix, for small oracles and reports.
inline Matrix to_dense(const SpMatrix& m) { return Matrix(m); }

} // namespace mgkan

#endif // MGKAN_MATRIX_HPP
