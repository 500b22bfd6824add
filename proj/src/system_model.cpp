#include "tdhinf/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tdhinf/linalg.hpp"

namespace tdhinf {

namespace {

std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

// Below this reciprocal condition estimate the resolvent is treated as singular.
constexpr double kResolventRcond = 1e-14;

}  // namespace

DelaySystem::DelaySystem(Matrix A0, std::vector<DelayTerm> delays, Matrix B, Matrix C, Matrix D)
    : a0_(std::move(A0)), b_(std::move(B)), c_(std::move(C)), d_(std::move(D)) {
    const Eigen::Index n = a0_.rows();
    if (n == 0 || a0_.cols() != n) throw DimensionMismatch("A0 must be square and non-empty, got " + shape(a0_));
    if (b_.rows() != n || b_.cols() == 0)
        throw DimensionMismatch("B must have " + std::to_string(n) + " rows, got " + shape(b_));
    if (c_.cols() != n || c_.rows() == 0)
        throw DimensionMismatch("C must have " + std::to_string(n) + " columns, got " + shape(c_));
    if (d_.rows() != c_.rows() || d_.cols() != b_.cols())
        throw DimensionMismatch("D must be " + std::to_string(c_.rows()) + "x" + std::to_string(b_.cols()) +
                                ", got " + shape(d_));

    for (std::size_t i = 0; i < delays.size(); ++i) {
        auto& term = delays[i];
        if (term.A.rows() != n || term.A.cols() != n)
            throw DimensionMismatch("delay term " + std::to_string(i) + ": A must be " + std::to_string(n) + "x" +
                                    std::to_string(n) + ", got " + shape(term.A));
        if (!(term.tau >= 0.0) || !std::isfinite(term.tau))
            throw NegativeDelay("delay term " + std::to_string(i) + " has invalid tau " + std::to_string(term.tau));
        if (term.tau == 0.0) {
            a0_ += term.A;
        } else {
            delays_.push_back(std::move(term));
        }
    }
    std::stable_sort(delays_.begin(), delays_.end(),
                     [](const DelayTerm& a, const DelayTerm& b) { return a.tau < b.tau; });
}

std::vector<double> DelaySystem::taus() const {
    std::vector<double> out;
    out.reserve(delays_.size());
    for (const auto& d : delays_) out.push_back(d.tau);
    return out;
}

bool DelaySystem::is_static() const { return b_.isZero(0.0) || c_.isZero(0.0); }

CMatrix characteristic_matrix(const DelaySystem& sys, double omega, std::span<const Complex> delay_factors) {
    CMatrix a = -sys.A0().cast<Complex>();
    a.diagonal().array() += Complex(0.0, omega);
    for (std::size_t i = 0; i < sys.m(); ++i) a -= delay_factors[i] * sys.delays()[i].A.cast<Complex>();
    return a;
}

FrequencyResponse evaluate_response(const DelaySystem& sys, double omega, std::span<const Complex> delay_factors) {
    FrequencyResponse out;
    out.omega = omega;
    const CMatrix a = characteristic_matrix(sys, omega, delay_factors);
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > kResolventRcond)) {
        std::ostringstream os;
        os << "resolvent is singular at omega = " << omega << " (rcond " << lu.rcond() << ")";
        throw SingularResolvent(os.str());
    }
    // One solve per column of B.
    const CMatrix x = lu.solve(sys.B().cast<Complex>());
    out.value = sys.C().cast<Complex>() * x + sys.D().cast<Complex>();
    out.singular_values = singular_values(out.value);
    return out;
}

FrequencyResponse eval_transfer(const DelaySystem& sys, double omega) {
    std::vector<Complex> factors;
    factors.reserve(sys.m());
    for (const auto& d : sys.delays()) factors.push_back(std::exp(Complex(0.0, -omega * d.tau)));
    return evaluate_response(sys, omega, factors);
}

double default_oracle_omega_max(const DelaySystem& sys) {
    double biggest = sys.A0().norm();
    for (const auto& d : sys.delays()) biggest = std::max(biggest, d.A.norm());
    return 10.0 * (1.0 + biggest);
}

GridPeak grid_oracle_norm(const DelaySystem& sys, const GridOracleOptions& opts) {
    const double omega_max = opts.omega_max > 0.0 ? opts.omega_max : default_oracle_omega_max(sys);
    if (opts.coarse_points < 100) throw std::invalid_argument("grid oracle needs at least 100 points");
    if (!(opts.refine_tol > 0.0)) throw std::invalid_argument("grid oracle needs a positive refine tolerance");

    auto sigma = [&](double w) { return eval_transfer(sys, w).sigma_max(); };

    const int count = opts.coarse_points;
    const double step = omega_max / (count - 1);
    std::vector<double> values(count);
    for (int i = 0; i < count; ++i) values[i] = sigma(i * step);

    // Local maxima of the sampled curve, best first. Refining several guards
    // against two peaks of nearly equal height sampled unevenly.
    std::vector<int> peaks;
    for (int i = 0; i < count; ++i) {
        const bool left = i == 0 || values[i] >= values[i - 1];
        const bool right = i == count - 1 || values[i] >= values[i + 1];
        if (left && right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return values[a] > values[b]; });
    if (peaks.size() > 5) peaks.resize(5);

    GridPeak best{values[0], 0.0};
    constexpr double inv_phi = 0.6180339887498949;
    for (int idx : peaks) {
        double lo = std::max(0.0, (idx - 1) * step);
        double hi = std::min(omega_max, (idx + 1) * step);
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = sigma(x1), f2 = sigma(x2);
        while (hi - lo > opts.refine_tol) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = sigma(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = sigma(x1);
            }
        }
        const std::pair<double, double> probes[] = {{idx * step, values[idx]}, {x1, f1}, {x2, f2}};
        for (const auto& [w, v] : probes)
            if (v > best.norm) best = {v, w};
    }

    const double at_infinity = sigma_max(sys.D());
    if (at_infinity > best.norm) best = {at_infinity, std::numeric_limits<double>::infinity()};
    return best;
}

}  // namespace tdhinf
