#pragma once

#include "tdhinf/level_matrices.hpp"

namespace tdhinf {

/// Odd-symmetric Chebyshev-Lobatto mesh on [-tau_max, tau_max]:
/// theta_i = tau_max * sin(i pi / (2N)), i = -N..N, stored at position i + N.
struct SpectralMesh {
    int N = 0;
    double tau_max = 0.0;
    Vector nodes;         // 2N+1, strictly increasing, nodes(N) == 0
    Vector bary_weights;  // barycentric weights of the node set
    Matrix diff_matrix;   // diff_matrix(i, k) = l_k'(theta_i)

    Eigen::Index size() const { return nodes.size(); }
    Eigen::Index center() const { return N; }
};

/// Throws InvalidMesh for N < 1 or tau_max <= 0.
SpectralMesh build_mesh(int N, double tau_max);

/// Lagrange basis values (l_{-N}(t), ..., l_N(t)) by the barycentric formula.
/// Returns an exact unit row when t is a node.
Vector lagrange_row(const SpectralMesh& mesh, double t);

/// Collocation discretization of the level operator, a real square matrix of
/// dimension (2N+1) * 2n. Block rows i != 0 hold diff_matrix(i, k) * I; the
/// middle block row holds the boundary condition sampled through lagrange_row.
struct DiscretizedOperator {
    Matrix matrix;
    double xi = 0.0;
    Eigen::Index block_size = 0;
};

/// Throws MeshTooSmall if the mesh does not cover the largest delay.
DiscretizedOperator build_discretized_operator(const LevelMatrices& lm, const SpectralMesh& mesh);

/// The delay-free level operator: just M0 (a Hamiltonian matrix).
DiscretizedOperator hamiltonian_operator(const LevelMatrices& lm);

/// Imaginary-axis part of the spectrum.
struct ImagSpectrum {
    std::vector<double> omegas;               // ascending, >= 0, deduplicated
    std::vector<CVector> eigvecs_at_zero_node;  // [u; v] seeds, empty unless requested
    double tol_used = 0.0;
};

inline constexpr double kDefaultImagTol = 1e-7;

/// Full eigendecomposition of op.matrix, keeping eigenvalues with
/// |Re lambda| <= rel_tol * max(1, |lambda|) and Im lambda >= 0 (up to the same
/// tolerance). With want_vectors the theta = 0 block of each unit eigenvector
/// is returned alongside its frequency.
ImagSpectrum imaginary_eigenvalues(const DiscretizedOperator& op, double rel_tol = kDefaultImagTol,
                                   bool want_vectors = true);

/// All eigenvalues of op.matrix.
CVector all_eigenvalues(const DiscretizedOperator& op);

}  // namespace tdhinf
