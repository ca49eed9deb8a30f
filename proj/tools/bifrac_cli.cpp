// Command-line front end: kernel evaluation, state statistics, phase-space
// grids, and the self-check suite.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bifrac/bifractional.hpp"
#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"
#include "bifrac/fracft.hpp"
#include "bifrac/json_io.hpp"
#include "bifrac/phasespace.hpp"
#include "bifrac/states.hpp"
#include "bifrac/verify.hpp"

namespace {

using bifrac::cplx;
using bifrac::Mat;
using bifrac::Vec;

constexpr double kPi = std::numbers::pi;

std::string format_value(cplx v) {
    // Round to the printed precision first so that tiny negative residues do
    // not surface as "-0.00000".
    auto snap = [](double x) { return std::round(x * 1e5) / 1e5 + 0.0; };
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.5f%+.5fi", snap(v.real()), snap(v.imag()));
    return buf;
}

double clamp_tiny(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

std::string human_num(double v) {
    if (std::isnan(v)) return "nan";
    return bifrac::fmt17(clamp_tiny(v));
}

std::string json_num(double v) {
    if (!std::isfinite(v)) return "null";
    return bifrac::fmt17(clamp_tiny(v));
}

struct Triple {
    double lo = 0, hi = 0;
    double third = 0;
};

Triple parse_triple(const std::string& text, const char* what) {
    Triple t;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> t.lo >> c1 >> t.hi >> c2 >> t.third) || c1 != ':' || c2 != ':' || !in.eof()) {
        throw CLI::ValidationError(std::string(what) + ": expected LO:HI:STEP, got '" + text + "'");
    }
    return t;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw bifrac::Error("cannot open output file " + path);
    return file;
}

Mat parse_operator(const std::string& spec, int& N) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--op: expected KIND:ARGS, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    if (kind == "fock") {
        const int n = std::stoi(args);
        if (n < 0 || n >= N) throw bifrac::Error("op: fock level " + args + " outside dimension");
        Vec v = Vec::Zero(N);
        v(n) = 1.0;
        return v * v.adjoint();
    }
    if (kind == "coherent") {
        const auto comma = args.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--op coherent: expected coherent:A,B");
        const double a = std::stod(args.substr(0, comma));
        const double b = std::stod(args.substr(comma + 1));
        const Vec psi = bifrac::displacement_reference(a, b, N).col(0);
        return psi * psi.adjoint();
    }
    if (kind == "thermal") {
        const double s = std::stod(args);
        if (!(s >= 0.0 && s < 1.0)) throw bifrac::Error("op: thermal parameter must lie in [0, 1)");
        Mat T = Mat::Zero(N, N);
        double w = 1.0 - s;
        for (int n = 0; n < N; ++n) {
            T(n, n) = w;
            w *= s;
        }
        return T;
    }
    if (kind == "file") {
        std::ifstream in(args);
        if (!in) throw bifrac::Error("op: cannot read " + args);
        std::stringstream buf;
        buf << in.rdbuf();
        Mat op = bifrac::operator_from_json(buf.str());
        N = static_cast<int>(op.rows());
        return op;
    }
    throw CLI::ValidationError("--op: unknown operator kind '" + kind + "'");
}

// ------------------------------------------------------------------ kernel --

int run_kernel(double theta, const std::vector<double>& compose, double x, double y, double tol) {
    if (!compose.empty()) {
        bifrac::QuadratureSettings q;
        q.tol = tol;
        const cplx via_quadrature = bifrac::compose_kernels(compose[0], compose[1], x, y, q);
        const cplx closed = bifrac::kernel_value(x, y, compose[0] + compose[1]);
        std::cout << format_value(via_quadrature) << "\n" << format_value(closed) << "\n";
        return 0;
    }
    std::cout << format_value(bifrac::kernel_value(x, y, theta)) << "\n";
    return 0;
}

// -------------------------------------------------------------- state-stats --

int run_state_stats(double alpha, double beta, double ta, std::optional<double> tb_opt, int N, int n_max,
                    const std::string& sweep, const std::string& out_path, bool as_json) {
    std::ofstream file;
    std::ostream& out = open_sink(out_path, file);
    if (!sweep.empty()) {
        const Triple t = parse_triple(sweep, "--sweep-theta-alpha");
        const auto rows = bifrac::sweep_stats(alpha, beta, t.lo, t.hi, t.third, n_max);
        out << "theta_alpha,sigma_pp,mean_n,g2,norm_captured\n";
        double rs_worst = 0.0;
        char buf[160];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.5g,%.5g,%.5g,%.5g,%.5g\n", r.theta_alpha, r.sigma_pp, r.mean_n, r.g2,
                          r.norm_captured);
            out << buf;
            rs_worst = std::max(rs_worst, std::abs(r.rs_defect));
        }
        std::fprintf(stderr, "# rs_check max |sigma_xx*sigma_pp - sigma_xp^2 - 1/4| = %.3g over %zu rows\n", rs_worst,
                     rows.size());
        return 0;
    }

    const double tb = tb_opt.value_or(ta);
    const bifrac::BifracAngles ang(ta, tb);
    const bifrac::StateResult res = bifrac::bifrac_coherent(alpha, beta, ang, N);
    const Vec& psi = res.state;
    auto [xop, pop] = bifrac::quadrature_ops(N);
    auto expect = [&psi](const Mat& A) { return psi.dot(A * psi).real(); };
    const double norm2 = psi.squaredNorm();
    double mean_n = 0.0, mean_n2 = 0.0;
    for (int n = 0; n < N; ++n) {
        const double w = std::norm(psi(n));
        mean_n += n * w;
        mean_n2 += static_cast<double>(n) * n * w;
    }
    const double g2 = (mean_n2 - mean_n) / (mean_n * mean_n);
    const double mx = expect(xop), mp = expect(pop);
    const double sxx = expect(xop * xop) - mx * mx;
    const double spp = expect(pop * pop) - mp * mp;
    const double sxp = 0.5 * expect(xop * pop + pop * xop) - mx * mp;

    const std::pair<const char*, double> fields[] = {
        {"mean_x", mx},           {"mean_p", mp},   {"sigma_xx", sxx}, {"sigma_pp", spp},
        {"sigma_xp", sxp},        {"mean_n", mean_n}, {"g2", g2},      {"norm_captured", norm2},
    };
    if (as_json) {
        out << "{\"alpha\": " << bifrac::fmt17(alpha) << ", \"beta\": " << bifrac::fmt17(beta)
            << ", \"theta_alpha\": " << bifrac::fmt17(ta) << ", \"theta_beta\": " << bifrac::fmt17(tb)
            << ", \"path\": \"" << bifrac::operator_path_name(res.path) << "\", \"trusted\": "
            << (res.report.trusted ? "true" : "false");
        for (const auto& [name, value] : fields) out << ", \"" << name << "\": " << json_num(value);
        out << "}\n";
    } else {
        for (const auto& [name, value] : fields) out << name << " " << human_num(value) << "\n";
        if (!res.report.trusted) std::fprintf(stderr, "# warning: truncation edge weight above threshold; raise --n\n");
    }
    return 0;
}

// --------------------------------------------------------------------- grid --

struct AxisSpec {
    double lo = -3.0, hi = 3.0;
    int count = 61;
};

AxisSpec parse_axis(const std::string& text, const char* what) {
    AxisSpec a;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a.lo >> c1 >> a.hi >> c2 >> a.count) || c1 != ':' || c2 != ':' || !in.eof()) {
        throw CLI::ValidationError(std::string(what) + ": expected LO:HI:COUNT, got '" + text + "'");
    }
    return a;
}

int run_grid(const std::string& kind, const std::string& op_spec, const std::string& range,
             const std::string& alpha_range, const std::string& beta_range, std::vector<double> angle_args, int N,
             const std::string& format, const std::string& out_path, bool allow_untrusted, bool verify_oracle) {
    const AxisSpec base = parse_axis(range, "--range");
    const AxisSpec aspec = alpha_range.empty() ? base : parse_axis(alpha_range, "--alpha-range");
    const AxisSpec bspec = beta_range.empty() ? base : parse_axis(beta_range, "--beta-range");
    if (aspec.count < 2 || bspec.count < 2) throw CLI::ValidationError("grid axes need at least 2 points");
    if (N < 4) throw CLI::ValidationError("--n must be at least 4");

    std::optional<bifrac::BifracAngles> angles;
    if (!angle_args.empty()) angles.emplace(angle_args[0], angle_args[1]);
    const bool needs_angles = kind == "bifrac-wigner";
    const bool takes_angles = needs_angles || kind == "q" || kind == "p";
    if (needs_angles && !angles) throw CLI::ValidationError("--kind bifrac-wigner requires --angles TA TB");
    if (!takes_angles && angles) throw CLI::ValidationError("--angles is not meaningful for --kind " + kind);
    if (takes_angles && !angles) angles.emplace(kPi / 2.0, kPi / 2.0);

    Mat theta_op = parse_operator(op_spec, N);
    const bifrac::Axis aax{aspec.lo, aspec.hi, aspec.count};
    const bifrac::Axis bax{bspec.lo, bspec.hi, bspec.count};

    bifrac::PhaseSpaceGrid grid;
    if (kind == "weyl") {
        grid = bifrac::weyl_function(theta_op, aax, bax);
    } else if (kind == "wigner") {
        grid = bifrac::wigner_function(theta_op, aax, bax);
    } else if (kind == "bifrac-wigner") {
        grid = bifrac::bifrac_wigner_grid(theta_op, aax, bax, *angles, N);
    } else if (kind == "q") {
        grid = bifrac::q_function(theta_op, aax, bax, *angles, N);
    } else if (kind == "p") {
        grid = bifrac::bifrac_p_grid(theta_op, aax, bax, *angles, {}, N);
    } else {
        throw CLI::ValidationError("--kind must be weyl|wigner|bifrac-wigner|q|p");
    }

    if (!grid.trusted && !allow_untrusted) {
        std::fprintf(stderr,
                     "error: grid carries untrusted truncation (raise --n, shrink the range, or pass "
                     "--allow-untrusted)\n");
        return 1;
    }

    if (verify_oracle) {
        if (kind != "bifrac-wigner") throw CLI::ValidationError("--verify-oracle applies to --kind bifrac-wigner");
        const int ds = std::min(N, 32);
        const Mat small = theta_op.topLeftCorner(ds, ds);
        const int ia[5] = {aax.count / 4, aax.count / 4, aax.count / 2, (3 * aax.count) / 4, (3 * aax.count) / 4};
        const int ib[5] = {bax.count / 4, (3 * bax.count) / 4, bax.count / 2, bax.count / 4, (3 * bax.count) / 4};
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const cplx want = bifrac::oracle_bifrac_wigner(small, aax.coord(ia[k]), bax.coord(ib[k]), *angles);
            worst = std::max(worst, std::abs(grid.at(ia[k], ib[k]) - want));
        }
        std::fprintf(stderr, "# oracle max |dev| = %.3g over 5 spot checks\n", worst);
        if (!(worst < 2e-3)) {
            std::fprintf(stderr, "error: grid disagrees with the quadrature oracle\n");
            return 1;
        }
    }

    std::ofstream file;
    std::ostream& out = open_sink(out_path, file);
    if (format == "csv") {
        out << bifrac::grid_to_csv(grid);
    } else if (format == "json") {
        out << bifrac::grid_to_json(grid) << "\n";
    } else {
        throw CLI::ValidationError("--format must be csv or json");
    }
    return 0;
}

// ------------------------------------------------------------------- verify --

int run_verify_cmd(int N, std::uint64_t seed, const std::string& only) {
    bifrac::VerifyConfig cfg;
    cfg.N = N;
    cfg.seed = seed;
    cfg.only = only;
    const auto results = bifrac::run_verify(cfg);
    std::cout << bifrac::verify_report_json(cfg, results) << "\n";
    for (const auto& r : results)
        if (!r.pass) return 1;
    return results.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bifractional displacement operators, coherent states, and phase-space maps"};
    app.require_subcommand(1);

    // kernel
    auto* kernel = app.add_subcommand("kernel", "Evaluate the fractional Fourier kernel");
    double theta = 0.0, kx = 0.0, ky = 0.0, ktol = 1e-6;
    std::vector<double> compose;
    auto* theta_opt = kernel->add_option("--theta", theta, "Transform angle in radians");
    auto* compose_opt =
        kernel->add_option("--compose", compose, "Two angles; checks the quadrature composition against the closed form")
            ->expected(2);
    kernel->add_option("--x", kx, "First coordinate");
    auto* y_opt = kernel->add_option("--y", ky, "Second coordinate");
    auto* z_opt = kernel->add_option("--z", ky, "Second coordinate (alias of --y)")->excludes(y_opt);
    (void)z_opt;
    kernel->add_option("--tol", ktol, "Composition quadrature tolerance");
    theta_opt->excludes(compose_opt);

    // state-stats
    auto* stats = app.add_subcommand("state-stats", "Moments and photon statistics of a coherent-family state");
    double s_alpha = 0.0, s_beta = 0.0, s_ta = 0.0, s_tb = 0.0;
    int s_N = 64, s_nmax = 30;
    std::string sweep, s_out;
    bool s_json = false;
    stats->add_option("--alpha", s_alpha, "Displacement component alpha")->required();
    stats->add_option("--beta", s_beta, "Displacement component beta")->required();
    auto* ta_opt = stats->add_option("--theta-alpha", s_ta, "First angle in radians");
    auto* tb_opt = stats->add_option("--theta-beta", s_tb, "Second angle (defaults to --theta-alpha)");
    stats->add_option("--n", s_N, "Fock-space dimension");
    stats->add_option("--n-max", s_nmax, "Photon cutoff for sweep statistics");
    auto* sweep_opt = stats->add_option("--sweep-theta-alpha", sweep, "Sweep LO:HI:STEP at theta_beta = 0; emits CSV");
    stats->add_option("--out", s_out, "Write to a file instead of stdout");
    stats->add_flag("--json", s_json, "Emit a JSON object instead of name/value lines");

    // grid
    auto* grid = app.add_subcommand("grid", "Sample a phase-space function on a grid");
    std::string g_kind, g_op, g_range = "-3:3:61", g_arange, g_brange, g_format = "csv", g_out;
    std::vector<double> g_angles;
    int g_N = 64;
    bool g_allow = false, g_oracle = false;
    grid->add_option("--kind", g_kind, "weyl|wigner|bifrac-wigner|q|p")->required();
    grid->add_option("--op", g_op, "Operator: fock:N | coherent:A,B | thermal:S | file:PATH")->required();
    grid->add_option("--range", g_range, "Both axes as LO:HI:COUNT");
    grid->add_option("--alpha-range", g_arange, "Override the alpha axis");
    grid->add_option("--beta-range", g_brange, "Override the beta axis");
    grid->add_option("--angles", g_angles, "Angle pair in radians")->expected(2);
    grid->add_option("--n", g_N, "Fock-space dimension");
    grid->add_option("--format", g_format, "csv or json");
    grid->add_option("--out", g_out, "Write to a file instead of stdout");
    grid->add_flag("--allow-untrusted", g_allow, "Emit the grid even when truncation is flagged");
    grid->add_flag("--verify-oracle", g_oracle, "Re-check 5 grid points against the quadrature oracle");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the numerical self-check suite and print a JSON report");
    int v_N = 64;
    std::uint64_t v_seed = 20250814ULL;
    std::string v_only;
    verify->add_option("--n", v_N, "Fock-space dimension for dimension-generic checks");
    verify->add_option("--seed", v_seed, "Seed for randomized checks");
    verify->add_option("--only", v_only, "Run only checks whose name contains this substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (kernel->parsed()) {
            if (compose.empty() && theta_opt->count() == 0)
                throw CLI::ValidationError("kernel needs --theta or --compose");
            return run_kernel(theta, compose, kx, ky, ktol);
        }
        if (stats->parsed()) {
            if (sweep_opt->count() == 0 && ta_opt->count() == 0)
                throw CLI::ValidationError("state-stats needs --theta-alpha or --sweep-theta-alpha");
            std::optional<double> tb;
            if (tb_opt->count() > 0) tb = s_tb;
            return run_state_stats(s_alpha, s_beta, s_ta, tb, s_N, s_nmax, sweep, s_out, s_json);
        }
        if (grid->parsed())
            return run_grid(g_kind, g_op, g_range, g_arange, g_brange, g_angles, g_N, g_format, g_out, g_allow,
                            g_oracle);
        if (verify->parsed()) return run_verify_cmd(v_N, v_seed, v_only);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bifrac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
