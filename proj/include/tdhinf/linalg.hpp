#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "tdhinf/types.hpp"

namespace tdhinf {

/// Determinant held as phase * exp(log_abs) so that products of many pivots
/// neither overflow nor underflow. A zero determinant has log_abs = -inf.
struct LogDet {
    Complex phase{1.0, 0.0};
    double log_abs = 0.0;

    bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }
    Complex value() const { return is_zero() ? Complex{} : phase * std::exp(log_abs); }

    friend LogDet operator*(const LogDet& a, const LogDet& b) {
        return {a.phase * b.phase, a.log_abs + b.log_abs};
    }
};

/// Determinant of a square dense matrix through partial-pivoting LU.
template <typename Derived>
LogDet log_det(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    LogDet out;
    if (a.rows() == 0) return out;
    Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(a.eval());
    const auto& packed = lu.matrixLU();
    Complex phase{static_cast<double>(lu.permutationP().determinant()), 0.0};
    double log_abs = 0.0;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const Complex pivot(packed(i, i));
        const double mag = std::abs(pivot);
        if (mag == 0.0) return {Complex{1.0, 0.0}, -std::numeric_limits<double>::infinity()};
        phase *= pivot / mag;
        log_abs += std::log(mag);
    }
    out.phase = phase;
    out.log_abs = log_abs;
    return out;
}

/// |a - b| / max(|a|, |b|) computed in log space. Returns 0 when both vanish.
double relative_difference(const LogDet& a, const LogDet& b);

/// Singular values in descending order.
Vector singular_values(const CMatrix& m);
Vector singular_values(const Matrix& m);

/// Largest singular value; 0 for empty matrices.
double sigma_max(const Matrix& m);

/// Complex-to-real lifting used by the least-squares correction:
/// the complex linear map z -> M z acting on [Re z; Im z].
Matrix real_stack(const CMatrix& m);

}  // namespace tdhinf
