#include "tdhinf/level_matrices.hpp"

#include <cmath>
#include <sstream>

namespace tdhinf {

LevelMatrices build_level_matrices(const DelaySystem& sys, double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("level xi must be positive");

    const Eigen::Index n = sys.n();
    const Matrix& A0 = sys.A0();
    const Matrix& B = sys.B();
    const Matrix& C = sys.C();
    const Matrix& D = sys.D();
    const double xi2 = xi * xi;

    LevelMatrices lm;
    lm.xi = xi;
    lm.D_xi = D.transpose() * D - xi2 * Matrix::Identity(sys.nu(), sys.nu());

    // D_xi is symmetric; its singular values are the absolute eigenvalues.
    const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(lm.D_xi, Eigen::EigenvaluesOnly).eigenvalues();
    const double smax = eig.cwiseAbs().maxCoeff();
    const double smin = eig.cwiseAbs().minCoeff();
    if (!(smin > kDxiRelativeGuard * smax)) {
        const double sd = sigma_max(D);
        std::ostringstream os;
        os << "D^T D - xi^2 I is singular at xi = " << xi << " (sigma_1(D) = " << sd << ")";
        throw SingularDxi(os.str(), sd);
    }
    const Eigen::PartialPivLU<Matrix> dxi(lm.D_xi);

    // F = D_xi^{-1} [D^T C, B^T]
    const Matrix DtC = D.transpose() * C;
    const Matrix DxiDtC = dxi.solve(DtC);
    const Matrix DxiBt = dxi.solve(Matrix(B.transpose()));

    lm.M0.resize(2 * n, 2 * n);
    lm.M0.topLeftCorner(n, n) = A0 - B * DxiDtC;
    lm.M0.topRightCorner(n, n) = -B * DxiBt;
    // -C^T (I - D D_xi^{-1} D^T) C, which equals xi^2 C^T (D D^T - xi^2 I)^{-1} C.
    lm.M0.bottomLeftCorner(n, n) = -C.transpose() * C + DtC.transpose() * DxiDtC;
    lm.M0.bottomRightCorner(n, n) = -A0.transpose() + DtC.transpose() * DxiBt;

    for (const auto& term : sys.delays()) {
        Matrix plus = Matrix::Zero(2 * n, 2 * n);
        plus.topLeftCorner(n, n) = term.A;
        Matrix minus = Matrix::Zero(2 * n, 2 * n);
        minus.bottomRightCorner(n, n) = -term.A.transpose();
        lm.M_plus.push_back(std::move(plus));
        lm.M_minus.push_back(std::move(minus));
        lm.taus.push_back(term.tau);
    }
    return lm;
}

CMatrix eval_H(const LevelMatrices& lm, Complex lambda) {
    CMatrix h = -lm.M0.cast<Complex>();
    h.diagonal().array() += lambda;
    for (std::size_t i = 0; i < lm.m(); ++i) {
        h -= std::exp(-lambda * lm.taus[i]) * lm.M_plus[i].cast<Complex>();
        h -= std::exp(lambda * lm.taus[i]) * lm.M_minus[i].cast<Complex>();
    }
    return h;
}

CMatrix eval_H_derivative(const LevelMatrices& lm, Complex lambda) {
    const Eigen::Index size = lm.M0.rows();
    CMatrix h = CMatrix::Identity(size, size);
    for (std::size_t i = 0; i < lm.m(); ++i) {
        const double tau = lm.taus[i];
        h += tau * std::exp(-lambda * tau) * lm.M_plus[i].cast<Complex>();
        h -= tau * std::exp(lambda * tau) * lm.M_minus[i].cast<Complex>();
    }
    return h;
}

double det_identity_residual(const DelaySystem& sys, const LevelMatrices& lm, double omega) {
    const FrequencyResponse g = eval_transfer(sys, omega);

    std::vector<Complex> factors;
    for (const auto& d : sys.delays()) factors.push_back(std::exp(Complex(0.0, -omega * d.tau)));
    const CMatrix a = characteristic_matrix(sys, omega, factors);

    const LogDet lhs = log_det(eval_H(lm, Complex(0.0, omega))) * log_det(lm.D_xi);

    CMatrix gram = g.value.adjoint() * g.value;
    gram.diagonal().array() -= lm.xi * lm.xi;
    const LogDet rhs = log_det(gram) * log_det(a) * log_det(CMatrix(-a.adjoint()));
    return relative_difference(lhs, rhs);
}

}  // namespace tdhinf
