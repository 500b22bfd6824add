#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tdhinf/collocation.hpp"
#include "tdhinf/level_matrices.hpp"
#include "tdhinf/spectral_disc.hpp"
#include "tdhinf/system_model.hpp"

namespace tdhinf {

enum class PredictMethod { Bisection, LevelSet };

std::string_view to_string(PredictMethod method);
std::optional<PredictMethod> parse_method(std::string_view text);

/// One probed level and how many imaginary-axis crossings it produced.
struct LevelProbe {
    double xi = 0.0;
    std::size_t crossings = 0;
};

struct PredictionResult {
    double xi_pred = 0.0;
    double xi_seed = 0.0;          // level at which omegas and seeds were taken
    std::vector<double> omegas;
    std::vector<CVector> seeds;    // theta = 0 eigenvector blocks [u; v]
    int iterations = 0;
    PredictMethod method = PredictMethod::LevelSet;
    std::vector<LevelProbe> probes;
    std::vector<double> lower_levels;  // successive xi_l (level-set ascent)
};

/// The level-set problem a predictor works on: the delay system plus, when it
/// has delays, the mesh of its spectral discretization. Without delays the
/// level operator is the Hamiltonian M0 and G_N coincides with G.
class LevelProblem {
public:
    LevelProblem(const DelaySystem& sys, int N);

    const DelaySystem& system() const { return *sys_; }
    const std::optional<SpectralMesh>& mesh() const { return mesh_; }

    DiscretizedOperator level_operator(double xi) const;
    ImagSpectrum crossings(double xi, bool want_vectors, double rel_tol = kDefaultImagTol) const;

    /// sigma_1 of the approximant G_N at jw (exact G without delays).
    double sigma_approx(double omega) const;

    /// max{sigma_1(G(0)), sigma_1(D), tol}
    double lower_bound(double tol) const;

    /// Smallest admissible level, just above sigma_1(D).
    double level_floor() const { return level_floor_; }
    double sigma_d() const { return sigma_d_; }

private:
    const DelaySystem* sys_;
    std::optional<SpectralMesh> mesh_;
    double sigma_d_ = 0.0;
    double level_floor_ = 0.0;
};

/// Bisection on the level (doubling until an upper bound is found). Stops once
/// the bracket is narrower than 2 tol. Throws NoConvergence after 200 levels.
PredictionResult predict_bisection(const LevelProblem& problem, double tol);

/// Two-step level-set iteration: probe sigma_1(G_N) at geometric midpoints of
/// consecutive crossings and raise the level to the best one. Throws
/// NoConvergence after 100 levels.
PredictionResult predict_levelset(const LevelProblem& problem, double tol,
                                  std::optional<double> omega_hint = std::nullopt);

struct CorrectionOptions {
    double residual_tol = 1e-10;  // relative to 1 + ||H_xi(jw)||_F
    int max_iterations = 50;
    int max_halvings = 20;
    double fd_step = 1e-7;  // central-difference step, scaled by max(1, |.|)
};

struct PeakCandidate {
    CVector u, v;
    double omega = 0.0;
    double xi = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    double omega_seed = 0.0;
};

/// Residual of the peak conditions, 4n+3 reals:
///   Re, Im of H_xi(jw) [u; v]                          (4n)
///   Re, Im of c^* [u; v] - 1                           (2)
///   Im{ v^* (I + sum_i A_i tau_i e^{-jw tau_i}) u }    (1)
Vector correction_residual(const DelaySystem& sys, const CVector& u, const CVector& v, double omega, double xi,
                           const CVector& normalization);

/// Damped Gauss-Newton from one seed. Never throws for numerical trouble;
/// failures come back with converged = false.
PeakCandidate correct_seed(const DelaySystem& sys, const CVector& seed, double omega, double xi,
                           const CorrectionOptions& opts = {});

/// Corrects every seed of a prediction and merges candidates that land on the
/// same peak.
std::vector<PeakCandidate> correct(const DelaySystem& sys, const PredictionResult& prediction,
                                   const CorrectionOptions& opts = {});

struct NormOptions {
    int N = 8;
    double tol = 1e-8;
    PredictMethod method = PredictMethod::LevelSet;
    std::optional<double> omega_hint;
    CorrectionOptions correction;
};

struct NormResult {
    double norm = 0.0;
    double omega_peak = 0.0;  // +inf when the supremum is only reached as w -> inf
    PredictionResult prediction;
    std::vector<PeakCandidate> candidates;
    int N_used = 0;
    bool degraded = false;        // no candidate converged; norm is the prediction
    bool static_system = false;   // G == D
};

/// Predictor-corrector H-infinity norm of a stable delay system.
NormResult hinf_norm(const DelaySystem& sys, const NormOptions& opts = {});

}  // namespace tdhinf
