#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdhinf/norm_algorithms.hpp"
#include "tdhinf/system_file.hpp"

namespace tdhinf::cli {

namespace {

// Locale-independent shortest round-trip formatting.
std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;  // no "-0.000"
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::string sci(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 2);
    return std::string(buf, res.ptr);
}

struct NormArgs {
    std::string file;
    int N = 8;
    double tol = 1e-8;
    std::string method = "levelset";
    std::optional<double> omega_hint;
    bool json = false;
};

struct PlotArgs {
    std::string file;
    double omega_max = 10.0;
    int points = 200;
    std::string approx = "exact";
    std::string out_path;
};

struct SpectrumArgs {
    std::string file;
    double xi = 0.0;
    int N = 8;
};

int cmd_norm(const NormArgs& args, std::ostream& out, std::ostream& err) {
    const auto method = parse_method(args.method);
    if (!method) {
        err << "error: --method must be 'bisection' or 'levelset'\n";
        return kInputError;
    }
    if (args.N < 1 || !(args.tol > 0.0)) {
        err << "error: --N must be >= 1 and --tol > 0\n";
        return kInputError;
    }
    const DelaySystem sys = load_system(args.file);

    NormOptions opts;
    opts.N = args.N;
    opts.tol = args.tol;
    opts.method = *method;
    opts.omega_hint = args.omega_hint;
    const NormResult res = hinf_norm(sys, opts);
    const bool at_infinity = std::isinf(res.omega_peak);

    if (args.json) {
        nlohmann::json doc;
        doc["norm"] = res.norm;
        doc["omega"] = at_infinity ? nlohmann::json(nullptr) : nlohmann::json(res.omega_peak);
        doc["peak_at_infinity"] = at_infinity;
        doc["method"] = std::string(to_string(*method));
        doc["N"] = res.N_used;
        doc["tol"] = args.tol;
        doc["static"] = res.static_system;
        doc["degraded"] = res.degraded;
        doc["prediction"] = {{"xi", res.prediction.xi_pred},
                             {"xi_seed", res.prediction.xi_seed},
                             {"iterations", res.prediction.iterations},
                             {"omegas", res.prediction.omegas}};
        doc["candidates"] = nlohmann::json::array();
        for (const auto& c : res.candidates)
            doc["candidates"].push_back({{"omega_seed", c.omega_seed},
                                         {"omega", c.omega},
                                         {"xi", c.xi},
                                         {"residual", c.residual_norm},
                                         {"iterations", c.iterations},
                                         {"converged", c.converged}});
        out << doc.dump(2) << "\n";
    } else {
        out << "norm = " << fixed(res.norm, 8) << "\n";
        out << "omega = " << (at_infinity ? std::string("inf") : fixed(res.omega_peak, 8)) << "\n";
        out << "method = " << to_string(*method) << "\n";
        out << "N = " << res.N_used << "\n";
        if (res.static_system) {
            out << "note: static system, G(jw) = D at every frequency\n";
        } else {
            if (at_infinity) out << "note: supremum approached as omega -> inf (sigma_1(D))\n";
            out << "prediction: xi = " << fixed(res.prediction.xi_pred, 8)
                << ", level iterations = " << res.prediction.iterations
                << ", seeds = " << res.prediction.omegas.size() << "\n";
            out << "candidates:\n";
            out << "  omega_seed        omega             xi                residual   iters  converged\n";
            for (const auto& c : res.candidates) {
                char line[160];
                std::snprintf(line, sizeof line, "  %-16s  %-16s  %-16s  %-9s  %5d  %s\n",
                              fixed(c.omega_seed, 8).c_str(), fixed(c.omega, 10).c_str(), fixed(c.xi, 10).c_str(),
                              sci(c.residual_norm).c_str(), c.iterations, c.converged ? "yes" : "no");
                out << line;
            }
        }
        if (res.degraded) out << "warning: no correction converged; norm is the prediction\n";
    }
    return res.degraded ? kNotConverged : kOk;
}

int cmd_sigma_plot(const PlotArgs& args, std::ostream& out, std::ostream& err) {
    if (args.points < 2) {
        err << "error: points must be ≥ 2\n";
        return kInputError;
    }
    if (!(args.omega_max > 0.0)) {
        err << "error: omega-max must be positive\n";
        return kInputError;
    }
    std::optional<int> approx_n;
    if (args.approx != "exact") {
        int n = 0;
        auto [ptr, ec] = std::from_chars(args.approx.data(), args.approx.data() + args.approx.size(), n);
        if (ec != std::errc{} || ptr != args.approx.data() + args.approx.size() || n < 1) {
            err << "error: --approx takes a positive integer N or 'exact'\n";
            return kInputError;
        }
        approx_n = n;
    }
    const DelaySystem sys = load_system(args.file);
    std::optional<SpectralMesh> mesh;
    if (approx_n && sys.m() > 0) mesh = build_mesh(*approx_n, sys.tau_max());

    std::ostringstream csv;
    const Eigen::Index k = std::min(sys.nu(), sys.ny());
    csv << "omega";
    for (Eigen::Index j = 1; j <= k; ++j) csv << ",sigma_" << j;
    csv << "\n";
    for (int i = 0; i < args.points; ++i) {
        const double w = args.omega_max * i / (args.points - 1);
        const FrequencyResponse g = mesh ? eval_GN(sys, *mesh, w) : eval_transfer(sys, w);
        csv << num(w);
        for (Eigen::Index j = 0; j < k; ++j) csv << "," << num(g.singular_values(j));
        csv << "\n";
    }

    if (args.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(args.out_path, std::ios::binary);
        if (!file || !(file << csv.str())) {
            err << "error: cannot write '" << args.out_path << "'\n";
            return kInputError;
        }
    }
    return kOk;
}

int cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& err) {
    if (args.N < 1) {
        err << "error: --N must be >= 1\n";
        return kInputError;
    }
    const DelaySystem sys = load_system(args.file);
    const LevelProblem problem(sys, args.N);
    DiscretizedOperator op;
    try {
        op = problem.level_operator(args.xi);
    } catch (const SingularDxi& e) {
        err << "error: " << e.what() << "; choose xi > sigma_1(D) = " << num(e.sigma_max_d()) << "\n";
        return kInputError;
    }
    CVector eig = all_eigenvalues(op);
    std::vector<Complex> sorted(eig.data(), eig.data() + eig.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        return a.imag() != b.imag() ? a.imag() > b.imag() : a.real() < b.real();
    });

    out << "xi = " << num(args.xi) << ", N = " << (sys.m() > 0 ? args.N : 0) << ", dimension = " << op.matrix.rows()
        << (sys.m() > 0 ? "" : " (delay-free: Hamiltonian matrix)") << "\n";
    std::size_t imag_count = 0;
    for (Complex l : sorted) {
        const bool on_axis = std::abs(l.real()) <= kDefaultImagTol * std::max(1.0, std::abs(l));
        char line[160];
        std::snprintf(line, sizeof line, "  %18s %c %17sj", fixed(l.real(), 10).c_str(), l.imag() < 0 ? '-' : '+',
                      fixed(std::abs(l.imag()), 10).c_str());
        out << line;
        if (on_axis) {
            ++imag_count;
            out << "  [imaginary axis, omega = " << fixed(std::abs(l.imag()), 10) << "]";
        }
        out << "\n";
    }
    if (imag_count == 0) out << "no imaginary-axis eigenvalues\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"H-infinity norm of retarded time-delay systems"};
    app.require_subcommand(1);

    NormArgs norm;
    auto* norm_cmd = app.add_subcommand("norm", "compute the H-infinity norm");
    norm_cmd->add_option("file", norm.file, "system file")->required();
    norm_cmd->add_option("--N", norm.N, "mesh parameter (2N+1 nodes)");
    norm_cmd->add_option("--tol", norm.tol, "prediction tolerance");
    norm_cmd->add_option("--method", norm.method, "bisection | levelset");
    norm_cmd->add_option("--omega-hint", norm.omega_hint, "candidate peak frequency");
    norm_cmd->add_flag("--json", norm.json, "machine-readable output");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("sigma-plot", "singular values over a frequency grid, as CSV");
    plot_cmd->add_option("file", plot.file, "system file")->required();
    plot_cmd->add_option("--omega-max", plot.omega_max, "upper end of the grid");
    plot_cmd->add_option("--points", plot.points, "number of grid points");
    plot_cmd->add_option("--approx", plot.approx, "N for the rational approximant, or 'exact'");
    plot_cmd->add_option("--out", plot.out_path, "output CSV path (stdout if omitted)");

    SpectrumArgs spec;
    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of the discretized level operator");
    spec_cmd->add_option("file", spec.file, "system file")->required();
    spec_cmd->add_option("--xi", spec.xi, "level")->required();
    spec_cmd->add_option("--N", spec.N, "mesh parameter");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*norm_cmd) return cmd_norm(norm, out, err);
        if (*plot_cmd) return cmd_sigma_plot(plot, out, err);
        if (*spec_cmd) return cmd_spectrum(spec, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const NegativeDelay& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace tdhinf::cli
