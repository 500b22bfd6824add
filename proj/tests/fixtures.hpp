#pragma once

#include <cmath>
#include <random>

#include "tdhinf/system_model.hpp"

namespace tdhinf::fixtures {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

/// x' = -3 x + x(t - 1) + u, y = x. Norm 0.5 at w = 0.
inline DelaySystem s1() { return DelaySystem(mat({{-3}}), {{1.0, mat({{1}})}}, mat({{1}}), mat({{1}}), mat({{0}})); }

/// 1 / (s + 1). Norm 1 at w = 0.
inline DelaySystem first_order_lag() { return DelaySystem(mat({{-1}}), {}, mat({{1}}), mat({{1}}), mat({{0}})); }

/// G == D = [[2]].
inline DelaySystem static_gain() { return DelaySystem(mat({{-1}}), {}, mat({{0}}), mat({{1}}), mat({{2}})); }

/// Delayed oscillator, single delay 0.5. Reference peak from an independent
/// dense sweep (numpy, 2e5 points + bounded scalar refinement).
inline DelaySystem s2() {
    return DelaySystem(mat({{0, 1}, {-4, -0.5}}), {{0.5, mat({{0, 0}, {0.5, 0.1}})}}, mat({{0}, {1}}),
                       mat({{1, 0}}), mat({{0}}));
}
inline constexpr double kS2Norm = 0.8221861981705582;
inline constexpr double kS2Omega = 1.8243569858496982;

/// MIMO, two delays, nonzero D, lightly damped (rightmost root -0.049).
inline DelaySystem s3() {
    return DelaySystem(mat({{-0.3, 2, 0}, {-2, -0.3, 1}, {0, -1, -1.5}}),
                       {{1.0, mat({{0, 0.2, 0}, {-0.3, 0, 0.1}, {0, 0.1, 0.2}})},
                        {0.4, mat({{0.3, 0, 0.1}, {0, 0.2, 0}, {0.1, 0, -0.2}})}},
                       mat({{1, 0}, {0, 1}, {1, 1}}), mat({{1, 0, 1}, {0, 1, 0}}), mat({{0.1, 0}, {0.2, 0.05}}));
}
inline constexpr double kS3Norm = 15.80529442624913;
inline constexpr double kS3Omega = 1.8928219048780315;

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = dist(rng);
    return m;
}

/// Delay-free system whose spectral abscissa is pushed to -margin.
inline DelaySystem random_delay_free(std::mt19937& rng, Eigen::Index n, Eigen::Index nu, Eigen::Index ny,
                                     double margin, bool with_d = true) {
    Matrix a = random_matrix(rng, n, n);
    const double abscissa = Eigen::EigenSolver<Matrix>(a).eigenvalues().real().maxCoeff();
    a -= (abscissa + margin) * Matrix::Identity(n, n);
    Matrix d = with_d ? random_matrix(rng, ny, nu, 0.3) : Matrix::Zero(ny, nu);
    return DelaySystem(a, {}, random_matrix(rng, n, nu), random_matrix(rng, ny, n), d);
}

/// Delay system that is stable for every delay value: log-norm of A0 plus the
/// sum of ||A_i||_2 is kept at -margin.
inline DelaySystem random_delay_stable(std::mt19937& rng, Eigen::Index n, Eigen::Index nu, Eigen::Index ny,
                                       const std::vector<double>& taus, double delay_weight, double margin,
                                       double rotation = 2.0) {
    Matrix skew = random_matrix(rng, n, n, rotation);
    skew = 0.5 * (skew - skew.transpose()).eval();
    Matrix a0 = skew + random_matrix(rng, n, n, 0.3);
    std::vector<DelayTerm> delays;
    double delay_norm = 0.0;
    for (double tau : taus) {
        Matrix ai = random_matrix(rng, n, n);
        ai *= delay_weight / (taus.size() * Eigen::JacobiSVD<Matrix>(ai).singularValues()(0));
        delay_norm += Eigen::JacobiSVD<Matrix>(ai).singularValues()(0);
        delays.push_back({tau, ai});
    }
    const Matrix sym = 0.5 * (a0 + a0.transpose());
    const double lognorm = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().maxCoeff();
    a0 -= (lognorm + delay_norm + margin) * Matrix::Identity(n, n);
    return DelaySystem(a0, delays, random_matrix(rng, n, nu), random_matrix(rng, ny, n), random_matrix(rng, ny, nu, 0.2));
}

/// n = 10, m = 7 oscillatory benchmark with delays 0.1 ... 0.6, 0.8. The
/// default seed has its peak at a resonance (w ~ 7.41), not at DC.
inline DelaySystem oscillatory_benchmark(unsigned seed = 2028) {
    std::mt19937 rng(seed);
    return random_delay_stable(rng, 10, 2, 4, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8}, 0.4, 0.05, 4.0);
}

}  // namespace tdhinf::fixtures
