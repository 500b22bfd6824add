#include "tdhinf/spectral_disc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace tdhinf {

SpectralMesh build_mesh(int N, double tau_max) {
    if (N < 1) throw InvalidMesh("mesh needs N >= 1");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw InvalidMesh("mesh needs tau_max > 0");

    SpectralMesh mesh;
    mesh.N = N;
    mesh.tau_max = tau_max;
    const Eigen::Index size = 2 * N + 1;

    // Nodes are generated for i >= 0 and mirrored so that theta_{-i} = -theta_i
    // holds bit for bit.
    mesh.nodes.resize(size);
    for (int i = 0; i <= N; ++i) {
        const double t = tau_max * std::sin(i * std::numbers::pi / (2.0 * N));
        mesh.nodes(N + i) = t;
        mesh.nodes(N - i) = -t;
    }
    mesh.nodes(N) = 0.0;

    // Chebyshev-Lobatto weights (-1)^j delta_j; symmetric in j since 2N is even.
    mesh.bary_weights.resize(size);
    for (Eigen::Index j = 0; j < size; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        mesh.bary_weights(j) = (j == 0 || j == size - 1) ? 0.5 * sign : sign;
    }

    const Vector& x = mesh.nodes;
    const Vector& w = mesh.bary_weights;
    mesh.diff_matrix = Matrix::Zero(size, size);
    for (Eigen::Index i = N; i < size; ++i) {
        double diag = 0.0;
        for (Eigen::Index k = 0; k < size; ++k) {
            if (k == i) continue;
            const double d = (w(k) / w(i)) / (x(i) - x(k));
            mesh.diff_matrix(i, k) = d;
            diag -= d;
        }
        mesh.diff_matrix(i, i) = diag;
    }
    // Anti-centrosymmetry: D(-i, -k) = -D(i, k).
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < size; ++k) mesh.diff_matrix(i, k) = -mesh.diff_matrix(size - 1 - i, size - 1 - k);
    mesh.diff_matrix(N, N) = 0.0;
    return mesh;
}

Vector lagrange_row(const SpectralMesh& mesh, double t) {
    const Eigen::Index size = mesh.size();
    Vector row = Vector::Zero(size);
    for (Eigen::Index k = 0; k < size; ++k) {
        if (t == mesh.nodes(k)) {
            row(k) = 1.0;
            return row;
        }
    }
    double denom = 0.0;
    for (Eigen::Index k = 0; k < size; ++k) {
        row(k) = mesh.bary_weights(k) / (t - mesh.nodes(k));
        denom += row(k);
    }
    return row / denom;
}

DiscretizedOperator build_discretized_operator(const LevelMatrices& lm, const SpectralMesh& mesh) {
    for (double tau : lm.taus)
        if (tau > mesh.tau_max * (1.0 + 1e-14))
            throw MeshTooSmall("mesh covers [-" + std::to_string(mesh.tau_max) + ", " + std::to_string(mesh.tau_max) +
                               "] but the system has delay " + std::to_string(tau));

    const Eigen::Index bs = lm.M0.rows();
    const Eigen::Index nodes = mesh.size();
    const Eigen::Index mid = mesh.center();

    DiscretizedOperator op;
    op.xi = lm.xi;
    op.block_size = bs;
    op.matrix = Matrix::Zero(nodes * bs, nodes * bs);

    for (Eigen::Index i = 0; i < nodes; ++i) {
        if (i == mid) continue;
        for (Eigen::Index k = 0; k < nodes; ++k) {
            const double d = mesh.diff_matrix(i, k);
            if (d != 0.0) op.matrix.block(i * bs, k * bs, bs, bs).diagonal().setConstant(d);
        }
    }

    // a_k = M0 l_k(0) + sum_i (M_i l_k(-tau_i) + M_{-i} l_k(tau_i)), with l_k(0) = delta_{k0}.
    auto middle = op.matrix.middleRows(mid * bs, bs);
    middle.middleCols(mid * bs, bs) = lm.M0;
    for (std::size_t i = 0; i < lm.m(); ++i) {
        const Vector behind = lagrange_row(mesh, -lm.taus[i]);
        const Vector ahead = lagrange_row(mesh, lm.taus[i]);
        for (Eigen::Index k = 0; k < nodes; ++k) {
            if (behind(k) != 0.0) middle.middleCols(k * bs, bs) += behind(k) * lm.M_plus[i];
            if (ahead(k) != 0.0) middle.middleCols(k * bs, bs) += ahead(k) * lm.M_minus[i];
        }
    }
    return op;
}

DiscretizedOperator hamiltonian_operator(const LevelMatrices& lm) {
    return {lm.M0, lm.xi, lm.M0.rows()};
}

CVector all_eigenvalues(const DiscretizedOperator& op) {
    Eigen::EigenSolver<Matrix> es(op.matrix, false);
    if (es.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    return es.eigenvalues();
}

ImagSpectrum imaginary_eigenvalues(const DiscretizedOperator& op, double rel_tol, bool want_vectors) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("imaginary-axis tolerance must be positive");

    Eigen::EigenSolver<Matrix> es(op.matrix, want_vectors);
    if (es.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    const CVector lambdas = es.eigenvalues();

    struct Hit {
        double omega;
        double offset;  // |Re lambda| relative to the acceptance scale
        Eigen::Index index;
    };
    std::vector<Hit> hits;
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
        const Complex l = lambdas(k);
        const double scale = rel_tol * std::max(1.0, std::abs(l));
        if (std::abs(l.real()) <= scale && l.imag() >= -scale)
            hits.push_back({std::max(0.0, l.imag()), std::abs(l.real()) / scale, k});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.omega < b.omega; });

    ImagSpectrum out;
    out.tol_used = rel_tol;
    const Eigen::Index mid_block = (op.matrix.rows() / op.block_size) / 2;
    std::vector<Hit> kept;
    for (const Hit& h : hits) {
        if (!kept.empty() && h.omega - kept.back().omega <= rel_tol * std::max(1.0, h.omega)) {
            // Same crossing seen twice; keep the representative closest to the axis.
            if (h.offset < kept.back().offset) kept.back() = {kept.back().omega, h.offset, h.index};
            continue;
        }
        kept.push_back(h);
    }
    for (const Hit& h : kept) {
        out.omegas.push_back(h.omega);
        if (want_vectors) {
            CVector v = es.eigenvectors().col(h.index);
            v.normalize();
            out.eigvecs_at_zero_node.push_back(v.segment(mid_block * op.block_size, op.block_size));
        }
    }
    return out;
}

}  // namespace tdhinf
