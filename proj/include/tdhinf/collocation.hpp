#pragma once

#include <span>

#include "tdhinf/spectral_disc.hpp"
#include "tdhinf/system_model.hpp"

namespace tdhinf {

/// Collocation polynomial p(t; lambda) of degree 2N for z' = lambda z:
/// p(0) = 1 and p'(theta_i) = lambda p(theta_i) at every nonzero mesh node.
/// Stored as coefficients in the Chebyshev basis T_j(t / tau_max).
struct CollocationEval {
    Complex lambda;
    double tau_max = 0.0;
    CVector coeffs;                  // 2N+1 Chebyshev coefficients
    CVector values_at_minus_tau;     // p(-tau_i; lambda) for the requested delays

    Complex value(double t) const;
    Complex derivative(double t) const;
};

/// Chebyshev values T_0..T_degree at x and their derivatives in x.
void chebyshev_basis(double x, Eigen::Index degree, Eigen::Ref<Vector> values, Eigen::Ref<Vector> derivs);

/// Solves the bordered (2N+1)x(2N+1) collocation system. Throws
/// CollocationSingular when lambda sits at a pole of p(t; .).
CollocationEval solve_pn(const SpectralMesh& mesh, Complex lambda, std::span<const double> taus = {});

/// G_N(jw): G with exp(-jw tau_i) replaced by p(-tau_i; jw). Equal to G when
/// the system has no delays.
FrequencyResponse eval_GN(const DelaySystem& sys, const SpectralMesh& mesh, double omega);

}  // namespace tdhinf
