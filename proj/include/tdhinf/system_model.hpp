#pragma once

#include <span>
#include <vector>

#include "tdhinf/types.hpp"

namespace tdhinf {

/// One pointwise state delay: the term A * x(t - tau).
struct DelayTerm {
    double tau = 0.0;
    Matrix A;
};

/// Retarded time-delay system
///
///     G(s) = C (s I - A0 - sum_i A_i exp(-tau_i s))^{-1} B + D.
///
/// Immutable once built. Zero delays are folded into A0 and the remaining
/// delays are kept sorted ascending, so every stored tau is strictly positive.
class DelaySystem {
public:
    /// Validates shapes and delays. Throws DimensionMismatch or NegativeDelay.
    DelaySystem(Matrix A0, std::vector<DelayTerm> delays, Matrix B, Matrix C, Matrix D);

    const Matrix& A0() const { return a0_; }
    const std::vector<DelayTerm>& delays() const { return delays_; }
    const Matrix& B() const { return b_; }
    const Matrix& C() const { return c_; }
    const Matrix& D() const { return d_; }

    Eigen::Index n() const { return a0_.rows(); }
    Eigen::Index nu() const { return b_.cols(); }
    Eigen::Index ny() const { return c_.rows(); }
    std::size_t m() const { return delays_.size(); }

    /// Largest stored delay, 0 for a delay-free system.
    double tau_max() const { return delays_.empty() ? 0.0 : delays_.back().tau; }
    std::vector<double> taus() const;

    /// True when G is identically D (B = 0 or C = 0).
    bool is_static() const;

private:
    Matrix a0_;
    std::vector<DelayTerm> delays_;
    Matrix b_, c_, d_;
};

/// Frequency-domain sample of G.
struct FrequencyResponse {
    double omega = 0.0;
    CMatrix value;
    Vector singular_values;  // descending

    double sigma_max() const { return singular_values.size() ? singular_values(0) : 0.0; }
};

/// Delay characteristic matrix jw I - A0 - sum_i A_i * factor_i, where
/// factor_i replaces exp(-jw tau_i). Shared by G and its rational approximant.
CMatrix characteristic_matrix(const DelaySystem& sys, double omega,
                              std::span<const Complex> delay_factors);

/// C * (characteristic matrix)^{-1} * B + D via an LU solve, with the
/// singular values filled in. Throws SingularResolvent near a pole.
FrequencyResponse evaluate_response(const DelaySystem& sys, double omega,
                                    std::span<const Complex> delay_factors);

/// G(jw).
FrequencyResponse eval_transfer(const DelaySystem& sys, double omega);

struct GridOracleOptions {
    double omega_max = 0.0;  // 0 selects 10 * (1 + max Frobenius norm of A0, A_i)
    int coarse_points = 2000;
    double refine_tol = 1e-10;
};

struct GridPeak {
    double norm = 0.0;
    double omega_peak = 0.0;  // +inf when the value at infinity (sigma_1(D)) dominates
};

/// Brute-force H-infinity norm: dense frequency sweep followed by
/// golden-section refinement of the best local maxima. Independent of the
/// level-set machinery and used as its oracle.
GridPeak grid_oracle_norm(const DelaySystem& sys, const GridOracleOptions& opts = {});

double default_oracle_omega_max(const DelaySystem& sys);

}  // namespace tdhinf
