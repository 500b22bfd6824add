#pragma once

#include <vector>

#include "tdhinf/linalg.hpp"
#include "tdhinf/system_model.hpp"

namespace tdhinf {

/// Level-dependent coefficient matrices of the boundary condition
///
///     phi'(0) = M0 phi(0) + sum_i (M_i phi(-tau_i) + M_{-i} phi(tau_i))
///
/// whose imaginary-axis eigenvalues mark the frequencies where G(jw) has a
/// singular value equal to xi.
struct LevelMatrices {
    double xi = 0.0;
    Matrix D_xi;                  // D^T D - xi^2 I
    Matrix M0;                    // 2n x 2n
    std::vector<Matrix> M_plus;   // [A_i 0; 0 0]
    std::vector<Matrix> M_minus;  // [0 0; 0 -A_i^T]
    std::vector<double> taus;

    Eigen::Index n() const { return M0.rows() / 2; }
    std::size_t m() const { return taus.size(); }
};

/// Relative threshold on sigma_min(D_xi) / sigma_max(D_xi) below which D_xi
/// is treated as singular.
inline constexpr double kDxiRelativeGuard = 1e-12;

/// Assembles M0, M_i, M_{-i} for level xi. Throws SingularDxi when xi is
/// within the guard of a singular value of D, std::invalid_argument if xi <= 0.
LevelMatrices build_level_matrices(const DelaySystem& sys, double xi);

/// H_xi(lambda) = lambda I - M0 - sum_i (M_i e^{-lambda tau_i} + M_{-i} e^{lambda tau_i}).
CMatrix eval_H(const LevelMatrices& lm, Complex lambda);

/// d/dlambda H_xi(lambda).
CMatrix eval_H_derivative(const LevelMatrices& lm, Complex lambda);

/// Relative mismatch of
///     det H_xi(jw) det D_xi  ==  det(G* G - xi^2 I) det A(jw) det(-A(jw)*)
/// with A(jw) the delay characteristic matrix. A pure consistency probe.
double det_identity_residual(const DelaySystem& sys, const LevelMatrices& lm, double omega);

}  // namespace tdhinf
