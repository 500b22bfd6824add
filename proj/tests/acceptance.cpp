// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_support.hpp"
#include "fixtures.hpp"
#include "tdhinf/norm_algorithms.hpp"
#include "tdhinf/system_file.hpp"

using namespace tdhinf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what;
            pass = false;
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Greedy nearest-neighbour matching of the spectrum against its mirror image.
double mirror_mismatch(const CVector& eig) {
    std::vector<bool> used(static_cast<std::size_t>(eig.size()), false);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
        const Complex target = -std::conj(eig(k));
        Eigen::Index best = -1;
        double dist = INFINITY;
        for (Eigen::Index j = 0; j < eig.size(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double d = std::abs(eig(j) - target);
            if (d < dist) {
                dist = d;
                best = j;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        worst = std::max(worst, dist / std::max(1.0, std::abs(eig(k))));
    }
    return worst;
}

Outcome criterion_1() {
    Outcome o;
    std::mt19937 rng(101);
    double worst = 0.0, slowest = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 1 + trial % 5, nu = 1 + (trial / 5) % 3, ny = 1 + (trial / 2) % 3;
        const DelaySystem sys = fixtures::random_delay_free(rng, n, nu, ny, 0.2, trial % 4 != 0);
        const auto t0 = Clock::now();
        const NormResult r = hinf_norm(sys);
        const double dt = seconds_since(t0);
        const double oracle = grid_oracle_norm(sys).norm;
        worst = std::max(worst, rel(r.norm, oracle));
        slowest = std::max(slowest, dt);
        o.require(!r.degraded, "degraded result on trial " + std::to_string(trial));
        o.require(rel(r.norm, oracle) <= 1e-6, "trial " + std::to_string(trial) + " off the oracle");
        o.require(dt < 1.0, "trial " + std::to_string(trial) + " slower than 1 s");
    }
    o.detail << (o.pass ? "" : "; ") << "max rel err " << worst << ", slowest " << slowest << " s";
    return o;
}

Outcome criterion_2() {
    Outcome o;
    for (PredictMethod m : {PredictMethod::Bisection, PredictMethod::LevelSet}) {
        NormOptions opts;
        opts.N = 8;
        opts.method = m;
        const NormResult r = hinf_norm(fixtures::s1(), opts);
        o.require(std::abs(r.norm - 0.5) <= 1e-8, std::string(to_string(m)) + " norm");
        o.require(std::abs(r.omega_peak) <= 1e-8, std::string(to_string(m)) + " omega");
        o.require(r.N_used == 8, "mesh escalated");
        o.detail << (o.pass ? "" : "; ") << to_string(m) << ": " << r.norm << " at " << r.omega_peak << " ";
    }
    return o;
}

Outcome criterion_3() {
    Outcome o;
    const DelaySystem lag = fixtures::first_order_lag();
    const double root3 = std::sqrt(3.0);

    const CVector below = all_eigenvalues(hamiltonian_operator(build_level_matrices(lag, 0.5)));
    o.require(below.size() == 2, "two eigenvalues at xi = 0.5");
    for (double sign : {1.0, -1.0}) {
        double best = INFINITY;
        for (Eigen::Index k = 0; k < below.size(); ++k) best = std::min(best, std::abs(below(k) - Complex(0.0, sign * root3)));
        o.require(best <= 1e-10, "eigenvalue at j sqrt 3");
    }
    const ImagSpectrum s_below = imaginary_eigenvalues(hamiltonian_operator(build_level_matrices(lag, 0.5)));
    o.require(s_below.omegas.size() == 1 && std::abs(s_below.omegas[0] - root3) <= 1e-10, "crossing omega sqrt 3");

    const CVector at_one = all_eigenvalues(hamiltonian_operator(build_level_matrices(lag, 1.0)));
    for (Eigen::Index k = 0; k < at_one.size(); ++k) o.require(std::abs(at_one(k)) <= kDefaultImagTol, "double zero at xi = 1");
    const ImagSpectrum s_one = imaginary_eigenvalues(hamiltonian_operator(build_level_matrices(lag, 1.0)));
    o.require(s_one.omegas.size() == 1 && s_one.omegas[0] <= kDefaultImagTol, "single crossing at 0 for xi = 1");

    o.require(imaginary_eigenvalues(hamiltonian_operator(build_level_matrices(lag, 2.0))).omegas.empty(),
              "no crossings at xi = 2");
    o.detail << (o.pass ? "" : "; ") << "xi=0.5 omega " << (s_below.omegas.empty() ? NAN : s_below.omegas[0]);
    return o;
}

Outcome criterion_4() {
    Outcome o;
    std::mt19937 rng(404);
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
        const Eigen::Index n = 1 + probe % 4;
        std::vector<double> taus;
        for (int i = 0; i <= probe % 3; ++i) taus.push_back(std::uniform_real_distribution<double>(0.05, 1.5)(rng));
        const DelaySystem sys = fixtures::random_delay_stable(rng, n, 1 + probe % 3, 1 + (probe / 3) % 3, taus, 0.6, 0.2);
        const double xi = sigma_max(sys.D()) * std::uniform_real_distribution<double>(1.05, 3.0)(rng) +
                          std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        const double w = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
        const double r = det_identity_residual(sys, build_level_matrices(sys, xi), w);
        worst = std::max(worst, r);
        o.require(r <= 1e-8, "probe " + std::to_string(probe));
    }
    o.detail << (o.pass ? "" : "; ") << "max residual " << worst;
    return o;
}

Outcome criterion_5() {
    Outcome o;
    std::mt19937 rng(505);
    double worst_det = 0.0, worst_eig = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const DelaySystem sys = fixtures::random_delay_stable(rng, 1 + trial % 4, 2, 2, {0.3, 0.7, 1.2}, 0.6, 0.2);
        const LevelMatrices lm = build_level_matrices(sys, sigma_max(sys.D()) + 0.5 + 0.1 * trial);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const Complex l(u(rng), u(rng));
        const LogDet a = log_det(eval_H(lm, -std::conj(l)));
        LogDet b = log_det(eval_H(lm, l));
        b.phase = std::conj(b.phase);
        worst_det = std::max(worst_det, relative_difference(a, b));

        if (trial < 10) {
            const DiscretizedOperator op = build_discretized_operator(lm, build_mesh(4 + trial % 5, sys.tau_max()));
            worst_eig = std::max(worst_eig, mirror_mismatch(all_eigenvalues(op)));
        }
    }
    o.require(worst_det <= 1e-10, "determinant reflection");
    o.require(worst_eig <= 1e-8, "eigenvalue mirror symmetry");
    o.detail << (o.pass ? "" : "; ") << "det " << worst_det << ", eig " << worst_eig;
    return o;
}

Outcome criterion_6() {
    Outcome o;
    std::mt19937 rng(606);
    int accepted = 0, checked = 0;
    double worst = 0.0;
    for (int trial = 0; accepted < 20 && trial < 200; ++trial) {
        const DelaySystem sys =
            fixtures::random_delay_stable(rng, 2 + trial % 3, 1 + trial % 2, 1 + (trial / 2) % 2, {0.4, 1.0}, 0.7, 0.1, 3.0);
        const LevelProblem problem(sys, 8);
        const double top = grid_oracle_norm(sys).norm;
        const double xi = problem.sigma_d() + std::uniform_real_distribution<double>(0.3, 0.95)(rng) * (top - problem.sigma_d());
        if (!(xi > problem.level_floor())) continue;
        const ImagSpectrum s = problem.crossings(xi, false);
        if (s.omegas.empty()) continue;
        ++accepted;
        for (double w : s.omegas) {
            const Vector sv = eval_GN(sys, *problem.mesh(), w).singular_values;
            const double gap = (sv.array() - xi).abs().minCoeff() / xi;
            worst = std::max(worst, gap);
            ++checked;
        }
    }
    o.require(accepted == 20, "20 levels with crossings");
    o.require(worst <= 1e-6, "crossing off the level");
    o.detail << (o.pass ? "" : "; ") << accepted << " levels, " << checked << " crossings, worst " << worst;
    return o;
}

Outcome criterion_7() {
    Outcome o;
    auto max_error = [](int N) {
        const SpectralMesh mesh = build_mesh(N, 1.0);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double w = 10.0 * i / 1000.0;
            const Complex p = solve_pn(mesh, Complex(0.0, w)).value(-1.0);
            worst = std::max(worst, std::abs(p - std::exp(Complex(0.0, -w))));
        }
        return worst;
    };
    const double e4 = max_error(4), e8 = max_error(8);
    o.require(e4 >= 10.0 * e8, "error ratio N=4 to N=8");

    std::mt19937 rng(707);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double tau = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
        const SpectralMesh mesh = build_mesh(2 + trial % 10, tau);
        const Complex l(std::uniform_real_distribution<double>(-2.0, 2.0)(rng),
                        std::uniform_real_distribution<double>(-10.0, 10.0)(rng));
        const double t = std::uniform_real_distribution<double>(0.0, tau)(rng);
        const Complex lhs = solve_pn(mesh, l).value(-t);
        const Complex rhs = solve_pn(mesh, -l).value(t);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    o.require(worst <= 1e-10, "reflection identity");
    o.detail << (o.pass ? "" : "; ") << "err N=4 " << e4 << ", N=8 " << e8 << ", ratio " << e4 / e8
             << ", reflection " << worst;
    return o;
}

Outcome criterion_8() {
    Outcome o;
    std::vector<DelaySystem> systems = {fixtures::s1(), fixtures::first_order_lag(), fixtures::s2(), fixtures::s3(),
                                        fixtures::oscillatory_benchmark()};
    std::mt19937 rng(808);
    for (int trial = 0; trial < 6; ++trial)
        systems.push_back(fixtures::random_delay_stable(rng, 3, 2, 2, {0.3, 0.9}, 0.6, 0.1, 3.0));
    int count = 0;
    double worst_hit = 0.0, worst_slope = 0.0;
    for (const DelaySystem& sys : systems) {
        for (PredictMethod m : {PredictMethod::Bisection, PredictMethod::LevelSet}) {
            NormOptions opts;
            opts.method = m;
            const NormResult r = hinf_norm(sys, opts);
            for (const PeakCandidate& c : r.candidates) {
                if (!c.converged) continue;
                ++count;
                const double hit = std::abs(eval_transfer(sys, c.omega).sigma_max() - c.xi) / c.xi;
                const double h = 1e-5 * std::max(1.0, c.omega);
                const double slope = (eval_transfer(sys, c.omega + h).sigma_max() -
                                      eval_transfer(sys, std::abs(c.omega - h)).sigma_max()) /
                                     (2.0 * h);
                worst_hit = std::max(worst_hit, hit);
                worst_slope = std::max(worst_slope, std::abs(slope));
            }
        }
    }
    o.require(count > 0, "some converged candidates");
    o.require(worst_hit <= 1e-8, "level hit");
    o.require(worst_slope <= 1e-4, "zero slope");
    o.detail << (o.pass ? "" : "; ") << count << " candidates, hit " << worst_hit << ", slope " << worst_slope;
    return o;
}

Outcome criterion_9() {
    Outcome o;
    int worst_iterations = 0;
    double worst_rel = 0.0, slowest = 0.0;
    double canonical_norm = 0.0, canonical_omega = 0.0;
    for (unsigned seed = 2024; seed < 2034; ++seed) {
        const DelaySystem sys = fixtures::oscillatory_benchmark(seed);
        NormOptions opts;
        opts.N = 8;
        opts.method = PredictMethod::LevelSet;
        const auto t0 = Clock::now();
        const NormResult r = hinf_norm(sys, opts);
        const double dt = seconds_since(t0);
        GridOracleOptions grid;
        grid.coarse_points = 20000;
        const GridPeak oracle = grid_oracle_norm(sys, grid);
        const std::string tag = "seed " + std::to_string(seed);
        o.require(r.prediction.iterations <= 10, tag + " level iterations");
        o.require(!r.degraded && r.N_used == 8, tag + " corrected at N = 8");
        o.require(rel(r.norm, oracle.norm) <= 1e-6, tag + " oracle agreement");
        o.require(dt < 10.0, tag + " runtime");
        worst_iterations = std::max(worst_iterations, r.prediction.iterations);
        worst_rel = std::max(worst_rel, rel(r.norm, oracle.norm));
        slowest = std::max(slowest, dt);
        if (seed == 2028) {
            canonical_norm = r.norm;
            canonical_omega = r.omega_peak;
            o.require(r.omega_peak > 1.0, "canonical benchmark peaks at a resonance");
        }
    }
    o.detail << (o.pass ? "" : "; ") << "canonical norm " << canonical_norm << " at " << canonical_omega
             << "; 10 seeds: max " << worst_iterations << " level iterations, max rel err " << worst_rel
             << ", slowest " << slowest << " s";
    return o;
}

Outcome criterion_10() {
    using namespace tdhinf::testing;
    Outcome o;
    {
        const CliRun r = run_cli({"norm", data("s1.json")});
        o.require(r.code == 0 && first_lines(r.out, 4) == golden("norm_s1_summary.txt"), "norm S1 golden");
        const CliRun s = run_cli({"norm", data("static.json")});
        o.require(s.code == 0 && s.out == golden("norm_static.txt"), "norm static golden");
        const CliRun bad = run_cli({"norm", data("missing_d.json")});
        o.require(bad.code == 1 && bad.err.find("'D'") != std::string::npos, "missing D");
        const CliRun js = run_cli({"norm", data("s1.json"), "--json"});
        const auto doc = nlohmann::json::parse(js.out, nullptr, false);
        o.require(js.code == 0 && !doc.is_discarded() && doc.contains("norm"), "json parses");
        if (!doc.is_discarded() && doc.contains("norm")) {
            char line[64];
            std::snprintf(line, sizeof line, "norm = %.8f\n", doc["norm"].get<double>());
            o.require(r.out.find(line) != std::string::npos, "json norm equals text norm");
        }
    }
    {
        const CliRun r = run_cli({"sigma-plot", data("s1.json"), "--omega-max", "10", "--points", "3"});
        o.require(r.code == 0 && csv_matches(r.out, golden("sigma_plot_s1.csv"), 1e-12), "sigma-plot golden");
        const CliRun exact = run_cli({"sigma-plot", data("lag.json"), "--points", "25"});
        const CliRun approx = run_cli({"sigma-plot", data("lag.json"), "--points", "25", "--approx", "8"});
        o.require(csv_matches(approx.out, exact.out, 1e-12), "delay-free approx equals exact");
        const CliRun one = run_cli({"sigma-plot", data("s1.json"), "--points", "1"});
        o.require(one.code == 1 && one.err.find("points must be ≥ 2") != std::string::npos, "points = 1");
    }
    {
        const CliRun below = run_cli({"spectrum", data("lag.json"), "--xi", "0.5"});
        o.require(below.code == 0 && below.out == golden("spectrum_lag_xi0.5.txt"), "spectrum xi = 0.5 golden");
        const CliRun above = run_cli({"spectrum", data("lag.json"), "--xi", "2"});
        o.require(above.code == 0 && above.out == golden("spectrum_lag_xi2.txt"), "spectrum xi = 2 golden");
        const CliRun singular = run_cli({"spectrum", data("unit_d.json"), "--xi", "1"});
        o.require(singular.code == 1 && singular.err.find("sigma_1(D)") != std::string::npos, "singular D_xi");
    }
    {
        std::mt19937 rng(1010);
        for (int trial = 0; trial < 20; ++trial) {
            const DelaySystem sys = fixtures::random_delay_stable(rng, 1 + trial % 4, 2, 1 + trial % 3, {0.1 * (trial + 1), 1.0 / 7.0}, 0.5, 0.2);
            const DelaySystem back = parse_system(write_system(sys));
            bool same = back.A0() == sys.A0() && back.B() == sys.B() && back.C() == sys.C() && back.D() == sys.D() &&
                        back.m() == sys.m();
            for (std::size_t i = 0; same && i < sys.m(); ++i)
                same = back.delays()[i].tau == sys.delays()[i].tau && back.delays()[i].A == sys.delays()[i].A;
            o.require(same, "round trip " + std::to_string(trial));
        }
    }
    o.detail << (o.pass ? "goldens, exit codes and round trip" : "");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"delay-free equivalence with the grid oracle", criterion_1},
        {"S1 norm 0.5 at omega 0, both methods", criterion_2},
        {"Hamiltonian eigenvalues of 1/(s+1)", criterion_3},
        {"determinant identity", criterion_4},
        {"symmetry under lambda -> -conj(lambda)", criterion_5},
        {"crossings are level crossings of G_N", criterion_6},
        {"collocation convergence and reflection", criterion_7},
        {"correction tangency", criterion_8},
        {"level-set efficiency on n=10, m=7 oscillatory benchmarks", criterion_9},
        {"CLI goldens, exit codes, round trip", criterion_10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " ("
                  << o.detail.str() << ")" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
