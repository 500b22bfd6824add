#include "tdhinf/norm_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tdhinf/linalg.hpp"

namespace tdhinf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisectionLevels = 200;
constexpr int kMaxLevelSetLevels = 100;
// Candidates closer than this (relative to max(1, w)) are one peak.
constexpr double kMergeTol = 1e-6;
constexpr int kPolishSteps = 3;

// Crossings at `level` with eigenvectors. Right at the supremum the crossing is
// a double eigenvalue and rounding can push it off the axis, so the level is
// lowered in growing steps until crossings show up again.
ImagSpectrum seed_spectrum(const LevelProblem& problem, double level, double tol, double& used_level) {
    double step = std::max(tol, 1e-12) * std::max(1.0, level);
    used_level = level;
    for (int attempt = 0; attempt < 10; ++attempt) {
        ImagSpectrum s = problem.crossings(used_level, true);
        if (!s.omegas.empty()) return s;
        const double next = level - step;
        if (next <= problem.level_floor()) break;
        used_level = next;
        step *= 4.0;
    }
    used_level = level;
    return {};
}

// sigma_1(G_N(jw)) with a small nudge when w hits a pole of the collocation
// polynomial or of the resolvent.
double probe_sigma(const LevelProblem& problem, double omega) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return problem.sigma_approx(omega);
        } catch (const CollocationSingular&) {
        } catch (const SingularResolvent&) {
        }
        omega = omega * (1.0 + 1e-8) + 1e-10;
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(PredictMethod method) {
    return method == PredictMethod::Bisection ? "bisection" : "levelset";
}

std::optional<PredictMethod> parse_method(std::string_view text) {
    if (text == "bisection") return PredictMethod::Bisection;
    if (text == "levelset") return PredictMethod::LevelSet;
    return std::nullopt;
}

LevelProblem::LevelProblem(const DelaySystem& sys, int N) : sys_(&sys) {
    if (sys.m() > 0) mesh_ = build_mesh(N, sys.tau_max());
    sigma_d_ = sigma_max(sys.D());
    level_floor_ = sigma_d_ * (1.0 + 1e-10);
}

DiscretizedOperator LevelProblem::level_operator(double xi) const {
    const LevelMatrices lm = build_level_matrices(*sys_, xi);
    return mesh_ ? build_discretized_operator(lm, *mesh_) : hamiltonian_operator(lm);
}

ImagSpectrum LevelProblem::crossings(double xi, bool want_vectors, double rel_tol) const {
    return imaginary_eigenvalues(level_operator(xi), rel_tol, want_vectors);
}

double LevelProblem::sigma_approx(double omega) const {
    return mesh_ ? eval_GN(*sys_, *mesh_, omega).sigma_max() : eval_transfer(*sys_, omega).sigma_max();
}

double LevelProblem::lower_bound(double tol) const {
    return std::max({eval_transfer(*sys_, 0.0).sigma_max(), sigma_d_, tol});
}

PredictionResult predict_bisection(const LevelProblem& problem, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("prediction tolerance must be positive");

    PredictionResult out;
    out.method = PredictMethod::Bisection;
    double lo = std::max(problem.lower_bound(tol), problem.level_floor());
    double hi = kInf;
    out.lower_levels.push_back(lo);

    while (hi - lo > 2.0 * tol) {
        if (++out.iterations > kMaxBisectionLevels)
            throw NoConvergence("bisection did not bracket the norm within " + std::to_string(kMaxBisectionLevels) +
                                " levels");
        const double xi = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
        const ImagSpectrum s = problem.crossings(xi, false);
        out.probes.push_back({xi, s.omegas.size()});
        if (s.omegas.empty()) {
            hi = xi;
        } else {
            lo = xi;
            out.lower_levels.push_back(lo);
        }
    }
    out.xi_pred = 0.5 * (lo + hi);

    const ImagSpectrum seeds = seed_spectrum(problem, lo, tol, out.xi_seed);
    out.omegas = seeds.omegas;
    out.seeds = seeds.eigvecs_at_zero_node;
    return out;
}

PredictionResult predict_levelset(const LevelProblem& problem, double tol, std::optional<double> omega_hint) {
    if (!(tol > 0.0)) throw std::invalid_argument("prediction tolerance must be positive");

    PredictionResult out;
    out.method = PredictMethod::LevelSet;
    double lo = problem.lower_bound(tol);
    if (omega_hint) lo = std::max(lo, probe_sigma(problem, std::abs(*omega_hint)));
    lo = std::max(lo, problem.level_floor());
    out.lower_levels.push_back(lo);

    double xi = lo;
    for (;;) {
        if (++out.iterations > kMaxLevelSetLevels)
            throw NoConvergence("level-set iteration did not settle within " + std::to_string(kMaxLevelSetLevels) +
                                " levels");
        xi = std::max(lo * (1.0 + 2.0 * tol), problem.level_floor());
        const ImagSpectrum s = problem.crossings(xi, false);
        out.probes.push_back({xi, s.omegas.size()});
        if (s.omegas.empty()) break;

        const auto& w = s.omegas;
        std::vector<double> mids;
        if (w.size() == 1) {
            mids.push_back(w[0]);
        } else {
            for (std::size_t i = 0; i + 1 < w.size(); ++i)
                mids.push_back(w[i] == 0.0 ? 0.5 * w[i + 1] : std::sqrt(w[i] * w[i + 1]));
        }
        double best = 0.0;
        for (double mu : mids) best = std::max(best, probe_sigma(problem, mu));

        if (best <= xi) {
            // No midpoint rises above the probed level: the remaining gap is
            // below what the crossing set resolves.
            lo = std::max(lo, best);
            break;
        }
        lo = best;
        out.lower_levels.push_back(lo);
    }
    out.xi_pred = 0.5 * (xi + lo);

    const ImagSpectrum seeds = seed_spectrum(problem, lo, tol, out.xi_seed);
    out.omegas = seeds.omegas;
    out.seeds = seeds.eigvecs_at_zero_node;
    return out;
}

Vector correction_residual(const DelaySystem& sys, const CVector& u, const CVector& v, double omega, double xi,
                           const CVector& normalization) {
    const Eigen::Index n = sys.n();
    const LevelMatrices lm = build_level_matrices(sys, xi);
    CVector z(2 * n);
    z << u, v;

    const CVector hz = eval_H(lm, Complex(0.0, omega)) * z;
    const Complex norm_eq = normalization.dot(z) - 1.0;

    CMatrix w = CMatrix::Identity(n, n);
    for (const auto& d : sys.delays()) w += d.tau * std::exp(Complex(0.0, -omega * d.tau)) * d.A.cast<Complex>();
    const Complex slope = v.dot(w * u);

    Vector r(4 * n + 3);
    r.head(2 * n) = hz.real();
    r.segment(2 * n, 2 * n) = hz.imag();
    r(4 * n) = norm_eq.real();
    r(4 * n + 1) = norm_eq.imag();
    r(4 * n + 2) = slope.imag();
    return r;
}

namespace {

struct CorrectionState {
    CVector z;  // [u; v]
    double omega = 0.0;
    double xi = 0.0;
};

Vector residual_at(const DelaySystem& sys, const CorrectionState& s, const CVector& c) {
    const Eigen::Index n = sys.n();
    return correction_residual(sys, s.z.head(n), s.z.tail(n), s.omega, s.xi, c);
}

// Jacobian with respect to [Re z; Im z; omega; xi]: analytic in z, central
// differences in omega and xi.
Matrix correction_jacobian(const DelaySystem& sys, const CorrectionState& s, const CVector& c, double fd_step) {
    const Eigen::Index n = sys.n();
    const Eigen::Index nz = 2 * n;
    Matrix jac = Matrix::Zero(4 * n + 3, 4 * n + 2);

    const LevelMatrices lm = build_level_matrices(sys, s.xi);
    jac.topLeftCorner(2 * nz, 2 * nz) = real_stack(eval_H(lm, Complex(0.0, s.omega)));
    jac.block(2 * nz, 0, 2, 2 * nz) = real_stack(CMatrix(c.adjoint()));

    CMatrix w = CMatrix::Identity(n, n);
    for (const auto& d : sys.delays()) w += d.tau * std::exp(Complex(0.0, -s.omega * d.tau)) * d.A.cast<Complex>();
    const CVector u = s.z.head(n), v = s.z.tail(n);
    const CVector a = w * u;            // d/d(conj v) side
    const CVector b = w.adjoint() * v;  // d/du side
    // Im(v^* W u): d/dRe(u) = -Im b, d/dIm(u) = Re b, d/dRe(v) = Im a, d/dIm(v) = -Re a.
    auto last = jac.row(4 * n + 2);
    for (Eigen::Index k = 0; k < n; ++k) {
        last(k) = -b(k).imag();
        last(nz + k) = b(k).real();
        last(n + k) = a(k).imag();
        last(nz + n + k) = -a(k).real();
    }

    const double hw = fd_step * std::max(1.0, std::abs(s.omega));
    CorrectionState plus = s, minus = s;
    plus.omega += hw;
    minus.omega -= hw;
    jac.col(2 * nz) = (residual_at(sys, plus, c) - residual_at(sys, minus, c)) / (2.0 * hw);

    const double hx = fd_step * std::max(1.0, std::abs(s.xi));
    plus = s;
    minus = s;
    plus.xi += hx;
    minus.xi -= hx;
    jac.col(2 * nz + 1) = (residual_at(sys, plus, c) - residual_at(sys, minus, c)) / (2.0 * hx);
    return jac;
}

double residual_scale(const DelaySystem& sys, const CorrectionState& s) {
    return 1.0 + eval_H(build_level_matrices(sys, s.xi), Complex(0.0, s.omega)).norm();
}

}  // namespace

PeakCandidate correct_seed(const DelaySystem& sys, const CVector& seed, double omega, double xi,
                           const CorrectionOptions& opts) {
    const Eigen::Index n = sys.n();
    PeakCandidate out;
    out.omega_seed = omega;
    out.omega = omega;
    out.xi = xi;

    const double seed_norm = seed.norm();
    if (seed.size() != 2 * n || !(seed_norm > 0.0)) return out;
    const CVector c = seed / seed_norm;
    CorrectionState state{c, omega, xi};

    auto finish = [&](const CorrectionState& s, double res, bool ok) {
        out.u = s.z.head(n);
        out.v = s.z.tail(n);
        out.omega = std::abs(s.omega);
        out.xi = s.xi;
        out.residual_norm = res;
        out.converged = ok;
        return out;
    };

    try {
        Vector r = residual_at(sys, state, c);
        double res = r.norm();
        for (int iter = 0;; ++iter) {
            if (res <= opts.residual_tol * residual_scale(sys, state)) {
                // Polish to rounding level with undamped steps while they still help.
                for (int extra = 0; extra < kPolishSteps && res > 0.0; ++extra) {
                    const Matrix jac = correction_jacobian(sys, state, c, opts.fd_step);
                    const Vector step = jac.colPivHouseholderQr().solve(-r);
                    CorrectionState trial = state;
                    trial.z.real() += step.head(2 * n);
                    trial.z.imag() += step.segment(2 * n, 2 * n);
                    trial.omega += step(4 * n);
                    trial.xi += step(4 * n + 1);
                    Vector trial_r;
                    try {
                        trial_r = residual_at(sys, trial, c);
                    } catch (const SingularDxi&) {
                        break;
                    }
                    if (!(trial_r.norm() < res)) break;
                    state = trial;
                    r = trial_r;
                    res = trial_r.norm();
                }
                return finish(state, res, true);
            }
            if (iter >= opts.max_iterations) return finish(state, res, false);
            out.iterations = iter + 1;

            const Matrix jac = correction_jacobian(sys, state, c, opts.fd_step);
            const Vector step = jac.colPivHouseholderQr().solve(-r);

            double damping = 1.0;
            bool accepted = false;
            for (int h = 0; h <= opts.max_halvings; ++h, damping *= 0.5) {
                CorrectionState trial = state;
                trial.z.real() += damping * step.head(2 * n);
                trial.z.imag() += damping * step.segment(2 * n, 2 * n);
                trial.omega += damping * step(4 * n);
                trial.xi += damping * step(4 * n + 1);
                Vector trial_r;
                try {
                    trial_r = residual_at(sys, trial, c);
                } catch (const SingularDxi&) {
                    continue;
                }
                if (trial_r.norm() < res) {
                    state = trial;
                    r = trial_r;
                    res = trial_r.norm();
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                // Stalled; accept if already at rounding level.
                return finish(state, res, res <= opts.residual_tol * residual_scale(sys, state));
            }
        }
    } catch (const Error&) {
        return finish(state, kInf, false);
    }
}

std::vector<PeakCandidate> correct(const DelaySystem& sys, const PredictionResult& prediction,
                                   const CorrectionOptions& opts) {
    std::vector<PeakCandidate> raw;
    for (std::size_t i = 0; i < prediction.omegas.size() && i < prediction.seeds.size(); ++i)
        raw.push_back(correct_seed(sys, prediction.seeds[i], prediction.omegas[i], prediction.xi_seed, opts));

    std::vector<PeakCandidate> merged;
    for (auto& cand : raw) {
        auto same = std::find_if(merged.begin(), merged.end(), [&](const PeakCandidate& m) {
            return m.converged && cand.converged &&
                   std::abs(m.omega - cand.omega) <= kMergeTol * std::max(1.0, m.omega);
        });
        if (same == merged.end()) {
            merged.push_back(std::move(cand));
        } else if (cand.xi > same->xi) {
            *same = std::move(cand);
        }
    }
    return merged;
}

NormResult hinf_norm(const DelaySystem& sys, const NormOptions& opts) {
    NormResult out;
    out.N_used = opts.N;

    if (sys.is_static()) {
        out.static_system = true;
        out.norm = sigma_max(sys.D());
        out.omega_peak = 0.0;
        out.prediction.xi_pred = out.norm;
        out.prediction.xi_seed = out.norm;
        out.prediction.method = opts.method;
        return out;
    }

    auto run = [&](int N) {
        const LevelProblem problem(sys, N);
        PredictionResult pred = opts.method == PredictMethod::Bisection
                                    ? predict_bisection(problem, opts.tol)
                                    : predict_levelset(problem, opts.tol, opts.omega_hint);
        std::vector<PeakCandidate> cands = correct(sys, pred, opts.correction);
        return std::make_pair(std::move(pred), std::move(cands));
    };
    auto any_converged = [](const std::vector<PeakCandidate>& c) {
        return std::any_of(c.begin(), c.end(), [](const PeakCandidate& p) { return p.converged; });
    };

    auto [prediction, candidates] = run(opts.N);
    // A single escalation: rerun on a finer mesh when no seed corrected.
    if (!any_converged(candidates) && !prediction.omegas.empty() && sys.m() > 0) {
        auto [pred2, cands2] = run(2 * opts.N);
        if (any_converged(cands2)) {
            prediction = std::move(pred2);
            candidates = std::move(cands2);
            out.N_used = 2 * opts.N;
        }
    }
    out.prediction = std::move(prediction);
    out.candidates = std::move(candidates);

    const double sigma_d = sigma_max(sys.D());
    const PeakCandidate* best = nullptr;
    for (const auto& c : out.candidates)
        if (c.converged && (!best || c.xi > best->xi)) best = &c;

    if (best) {
        out.norm = best->xi;
        out.omega_peak = best->omega;
        if (sigma_d > out.norm) {
            out.norm = sigma_d;
            out.omega_peak = kInf;
        }
    } else if (out.prediction.omegas.empty() && out.prediction.xi_seed <= sigma_d * (1.0 + 1e-9)) {
        // No finite crossing above sigma_1(D): the supremum is the value at infinity.
        out.norm = sigma_d;
        out.omega_peak = kInf;
    } else {
        out.degraded = true;
        out.norm = out.prediction.xi_pred;
        out.omega_peak = out.prediction.omegas.empty() ? 0.0 : out.prediction.omegas.front();
    }
    return out;
}

}  // namespace tdhinf
