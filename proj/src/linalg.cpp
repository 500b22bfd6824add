#include "tdhinf/linalg.hpp"

#include <algorithm>

namespace tdhinf {

double relative_difference(const LogDet& a, const LogDet& b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    if (a.is_zero() || b.is_zero()) return 1.0;
    // Scale both by the larger magnitude before subtracting.
    const double top = std::max(a.log_abs, b.log_abs);
    const Complex va = a.phase * std::exp(a.log_abs - top);
    const Complex vb = b.phase * std::exp(b.log_abs - top);
    return std::abs(va - vb);
}

Vector singular_values(const CMatrix& m) {
    if (m.size() == 0) return Vector{};
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues();
}

Vector singular_values(const Matrix& m) {
    if (m.size() == 0) return Vector{};
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

double sigma_max(const Matrix& m) {
    const Vector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(0);
}

Matrix real_stack(const CMatrix& m) {
    const Eigen::Index r = m.rows(), c = m.cols();
    Matrix out(2 * r, 2 * c);
    out.topLeftCorner(r, c) = m.real();
    out.topRightCorner(r, c) = -m.imag();
    out.bottomLeftCorner(r, c) = m.imag();
    out.bottomRightCorner(r, c) = m.real();
    return out;
}

}  // namespace tdhinf
