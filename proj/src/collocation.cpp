#include "tdhinf/collocation.hpp"

#include <sstream>

namespace tdhinf {

namespace {

constexpr double kCollocationRcond = 1e-14;

}  // namespace

void chebyshev_basis(double x, Eigen::Index degree, Eigen::Ref<Vector> values, Eigen::Ref<Vector> derivs) {
    values(0) = 1.0;
    derivs(0) = 0.0;
    if (degree == 0) return;
    values(1) = x;
    derivs(1) = 1.0;
    for (Eigen::Index k = 1; k < degree; ++k) {
        values(k + 1) = 2.0 * x * values(k) - values(k - 1);
        derivs(k + 1) = 2.0 * values(k) + 2.0 * x * derivs(k) - derivs(k - 1);
    }
}

Complex CollocationEval::value(double t) const {
    const Eigen::Index deg = coeffs.size() - 1;
    Vector v(deg + 1), d(deg + 1);
    chebyshev_basis(t / tau_max, deg, v, d);
    return v.cast<Complex>().dot(coeffs);  // dot conjugates the left side; v is real
}

Complex CollocationEval::derivative(double t) const {
    const Eigen::Index deg = coeffs.size() - 1;
    Vector v(deg + 1), d(deg + 1);
    chebyshev_basis(t / tau_max, deg, v, d);
    return d.cast<Complex>().dot(coeffs) / tau_max;
}

CollocationEval solve_pn(const SpectralMesh& mesh, Complex lambda, std::span<const double> taus) {
    const Eigen::Index size = mesh.size();
    const Eigen::Index deg = size - 1;

    // Row 0: p(0) = 1. Remaining rows: p'(theta) - lambda p(theta) = 0 at the
    // nonzero nodes, ascending.
    CMatrix system(size, size);
    CVector rhs = CVector::Zero(size);
    Vector v(size), d(size);
    chebyshev_basis(0.0, deg, v, d);
    system.row(0) = v.transpose().cast<Complex>();
    rhs(0) = 1.0;
    Eigen::Index row = 1;
    for (Eigen::Index k = 0; k < size; ++k) {
        if (k == mesh.center()) continue;
        chebyshev_basis(mesh.nodes(k) / mesh.tau_max, deg, v, d);
        system.row(row++) = (d / mesh.tau_max).transpose().cast<Complex>() - lambda * v.transpose().cast<Complex>();
    }

    Eigen::PartialPivLU<CMatrix> lu(system);
    if (!(lu.rcond() > kCollocationRcond)) {
        std::ostringstream os;
        os << "collocation system singular at lambda = " << lambda;
        throw CollocationSingular(os.str());
    }

    CollocationEval out;
    out.lambda = lambda;
    out.tau_max = mesh.tau_max;
    out.coeffs = lu.solve(rhs);
    out.values_at_minus_tau.resize(static_cast<Eigen::Index>(taus.size()));
    for (std::size_t i = 0; i < taus.size(); ++i) out.values_at_minus_tau(i) = out.value(-taus[i]);
    return out;
}

FrequencyResponse eval_GN(const DelaySystem& sys, const SpectralMesh& mesh, double omega) {
    if (sys.m() == 0) return eval_transfer(sys, omega);
    const std::vector<double> taus = sys.taus();
    const CollocationEval p = solve_pn(mesh, Complex(0.0, omega), taus);
    std::vector<Complex> factors(p.values_at_minus_tau.data(), p.values_at_minus_tau.data() + taus.size());
    return evaluate_response(sys, omega, factors);
}

}  // namespace tdhinf
