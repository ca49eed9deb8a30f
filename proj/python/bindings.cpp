#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bifrac/bifractional.hpp"
#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"
#include "bifrac/fracft.hpp"
#include "bifrac/phasespace.hpp"
#include "bifrac/states.hpp"
#include "bifrac/verify.hpp"

namespace py = pybind11;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

bifrac::BifracAngles angles_of(double ta, double tb) { return bifrac::BifracAngles(ta, tb); }

py::dict grid_to_dict(const bifrac::PhaseSpaceGrid& g) {
    Eigen::MatrixXcd values(g.alpha_axis.count, g.beta_axis.count);
    Eigen::VectorXd alpha(g.alpha_axis.count), beta(g.beta_axis.count);
    for (int i = 0; i < g.alpha_axis.count; ++i) alpha(i) = g.alpha_axis.coord(i);
    for (int j = 0; j < g.beta_axis.count; ++j) beta(j) = g.beta_axis.coord(j);
    for (int i = 0; i < g.alpha_axis.count; ++i)
        for (int j = 0; j < g.beta_axis.count; ++j) values(i, j) = g.at(i, j);
    py::dict d;
    d["values"] = values;
    d["alpha"] = alpha;
    d["beta"] = beta;
    d["kind"] = std::string(bifrac::grid_kind_name(g.kind));
    d["fock_dim"] = g.fock_dim;
    d["trusted"] = g.trusted;
    if (g.angles.has_value())
        d["angles"] = py::make_tuple(g.angles->theta_alpha, g.angles->theta_beta);
    else
        d["angles"] = py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bifractional displacement operators, coherent states, and phase-space maps";

    py::register_exception<bifrac::Error>(m, "Error");

    m.def("reduce_angle", &bifrac::reduce_angle, py::arg("theta"),
          "Reduce an angle to (-pi, pi].");
    m.def("kernel_value", &bifrac::kernel_value, py::arg("x"), py::arg("y"), py::arg("theta"),
          "Fractional Fourier kernel K(x, y; theta).");
    m.def(
        "compose_kernels",
        [](double theta1, double theta2, double x, double z) {
            return bifrac::compose_kernels(theta1, theta2, x, z);
        },
        py::arg("theta1"), py::arg("theta2"), py::arg("x"), py::arg("z"),
        "Quadrature of integral dy K(x,y;theta1) K(y,z;theta2).");

    m.def("displacement_reference", &bifrac::displacement_reference, py::arg("alpha"),
          py::arg("beta"), py::arg("n"), "Displacement matrix from the exact ladder recurrence.");
    m.def(
        "parity", [](int n) { return bifrac::parity(n); }, py::arg("n"),
        "Parity matrix diag((-1)^k).");
    m.def(
        "displaced_parity",
        [](double alpha, double beta, int n) { return bifrac::parity(alpha, beta, n); },
        py::arg("alpha"), py::arg("beta"), py::arg("n"));

    m.def(
        "bifrac_operator",
        [](double alpha, double beta, double theta_alpha, double theta_beta, int n) {
            const bifrac::OperatorResult r =
                bifrac::bifrac_operator(alpha, beta, angles_of(theta_alpha, theta_beta), n);
            return py::make_tuple(r.op, std::string(bifrac::operator_path_name(r.path)),
                                  r.report.trusted);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("theta_beta"),
        py::arg("n"), "Returns (matrix, construction path, trusted flag).");
    m.def(
        "bifrac_operator_integral",
        [](double alpha, double beta, double theta_alpha, double theta_beta, int n) {
            return bifrac::bifrac_operator_integral(alpha, beta, angles_of(theta_alpha, theta_beta),
                                                    n);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("theta_beta"),
        py::arg("n"), "Slow defining-integral oracle (no phase convention applied).");
    m.def(
        "product_vs_integral_phase",
        [](double theta_alpha, double theta_beta) {
            return bifrac::product_vs_integral_phase(angles_of(theta_alpha, theta_beta));
        },
        py::arg("theta_alpha"), py::arg("theta_beta"),
        "Constant phase between the split product form and the defining integral.");
    m.def(
        "split_fock_requirement",
        [](double theta_alpha, double theta_beta) {
            return bifrac::split_fock_requirement(angles_of(theta_alpha, theta_beta));
        },
        py::arg("theta_alpha"), py::arg("theta_beta"));
    m.def(
        "gaussian_fingerprint",
        [](const bifrac::Mat& U, int fit_block) {
            const bifrac::GaussianUnitary g = bifrac::gaussian_fingerprint(U, fit_block);
            py::dict d;
            d["S"] = g.S;
            d["d"] = g.d;
            d["phase"] = g.phase;
            d["residual"] = g.residual;
            return d;
        },
        py::arg("u"), py::arg("fit_block") = 0,
        "Affine Heisenberg action (S, d), vacuum phase, and fit residual.");
    m.def(
        "heisenberg_action",
        [](double alpha, double beta, double theta_alpha, double theta_beta) {
            Eigen::Matrix2d S;
            Eigen::Vector2d d;
            bifrac::heisenberg_action(alpha, beta, angles_of(theta_alpha, theta_beta), S, d);
            return py::make_tuple(S, d);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("theta_beta"));

    m.def(
        "bifrac_coherent",
        [](double alpha, double beta, double theta_alpha, double theta_beta, int n) {
            const bifrac::StateResult r =
                bifrac::bifrac_coherent(alpha, beta, angles_of(theta_alpha, theta_beta), n);
            return py::make_tuple(r.state, std::string(bifrac::operator_path_name(r.path)),
                                  r.report.trusted);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("theta_beta"),
        py::arg("n"), "Returns (amplitudes, construction path, trusted flag).");
    m.def(
        "coherent_amplitudes",
        [](double alpha, double beta, double theta_alpha, double theta_beta, int n) {
            return bifrac::coherent_amplitudes(alpha, beta, angles_of(theta_alpha, theta_beta), n);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("theta_beta"),
        py::arg("n"), "Closed-form amplitudes <k|U|0>, truncation-free per element.");
    m.def(
        "analysis_coefficients",
        [](const bifrac::Vec& g, double alpha, double beta, double theta_alpha,
           double theta_beta) {
            return bifrac::analysis_coefficients(g, alpha, beta, angles_of(theta_alpha, theta_beta),
                                                 static_cast<int>(g.size()));
        },
        py::arg("g"), py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"),
        py::arg("theta_beta"), "(1/2pi) <alpha,beta;angles | g>.");

    m.def(
        "photon_stats",
        [](double alpha, double beta, double theta_alpha, int n_max) {
            const bifrac::PhotonStats s =
                bifrac::photon_stats(bifrac::bargmann_params(alpha, beta, theta_alpha), n_max);
            Eigen::VectorXcd a_n(static_cast<Eigen::Index>(s.a_n.size()));
            for (Eigen::Index k = 0; k < a_n.size(); ++k) a_n(k) = s.a_n[static_cast<std::size_t>(k)];
            py::dict d;
            d["a_n"] = a_n;
            d["mean_n"] = s.mean_n;
            d["mean_n2"] = s.mean_n2;
            d["g2"] = s.g2;
            d["norm_captured"] = s.norm_captured;
            d["norm_warning"] = s.norm_warning;
            return d;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"), py::arg("n_max") = 30,
        "Photon-number statistics of the theta_beta = 0 coherent state.");
    m.def(
        "moments",
        [](double alpha, double beta, double theta_alpha) {
            const bifrac::Moments mm =
                bifrac::moments_from_wavefunction(bifrac::bargmann_params(alpha, beta, theta_alpha));
            py::dict d;
            d["mean_x"] = mm.mean_x;
            d["mean_p"] = mm.mean_p;
            d["sigma_xx"] = mm.sxx;
            d["sigma_pp"] = mm.spp;
            d["sigma_xp"] = mm.sxp;
            return d;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"),
        "Quadrature moments of the theta_beta = 0 coherent state.");
    m.def(
        "wavefunction",
        [](double x, double alpha, double beta, double theta_alpha) {
            return bifrac::wavefunction(x, bifrac::bargmann_params(alpha, beta, theta_alpha));
        },
        py::arg("x"), py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"),
        "Position wavefunction of the theta_beta = 0 coherent state.");
    m.def(
        "sweep_stats",
        [](double alpha, double beta, double lo, double hi, double step, int n_max) {
            const auto rows = bifrac::sweep_stats(alpha, beta, lo, hi, step, n_max);
            Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), 6);
            for (Eigen::Index i = 0; i < out.rows(); ++i) {
                const auto& r = rows[static_cast<std::size_t>(i)];
                out(i, 0) = r.theta_alpha;
                out(i, 1) = r.sigma_pp;
                out(i, 2) = r.mean_n;
                out(i, 3) = r.g2;
                out(i, 4) = r.norm_captured;
                out(i, 5) = r.rs_defect;
            }
            return out;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("lo"), py::arg("hi"), py::arg("step"),
        py::arg("n_max") = 30,
        "Rows of (theta_alpha, sigma_pp, mean_n, g2, norm_captured, rs_defect).");

    m.def(
        "grid",
        [](const std::string& kind, const bifrac::Mat& op,
           std::tuple<double, double, int> alpha_axis, std::tuple<double, double, int> beta_axis,
           std::optional<std::pair<double, double>> angle_pair, int n) {
            const bifrac::Axis aax{std::get<0>(alpha_axis), std::get<1>(alpha_axis),
                                   std::get<2>(alpha_axis)};
            const bifrac::Axis bax{std::get<0>(beta_axis), std::get<1>(beta_axis),
                                   std::get<2>(beta_axis)};
            const int N = n > 0 ? n : static_cast<int>(op.rows());
            const bool needs_angles = kind == "bifrac-wigner";
            const bool takes_angles = needs_angles || kind == "q" || kind == "p";
            if (needs_angles && !angle_pair)
                throw py::value_error("grid: kind 'bifrac-wigner' requires angles");
            if (!takes_angles && angle_pair)
                throw py::value_error("grid: angles are not meaningful for kind '" + kind + "'");
            std::optional<bifrac::BifracAngles> angles;
            if (takes_angles)
                angles = angle_pair ? angles_of(angle_pair->first, angle_pair->second)
                                    : angles_of(kHalfPi, kHalfPi);
            if (kind == "weyl") return grid_to_dict(bifrac::weyl_function(op, aax, bax));
            if (kind == "wigner") return grid_to_dict(bifrac::wigner_function(op, aax, bax));
            if (kind == "bifrac-wigner")
                return grid_to_dict(bifrac::bifrac_wigner_grid(op, aax, bax, *angles, N));
            if (kind == "q") return grid_to_dict(bifrac::q_function(op, aax, bax, *angles, N));
            if (kind == "p")
                return grid_to_dict(bifrac::bifrac_p_grid(op, aax, bax, *angles, {}, N));
            throw py::value_error("grid: kind must be weyl|wigner|bifrac-wigner|q|p");
        },
        py::arg("kind"), py::arg("op"), py::arg("alpha_axis"), py::arg("beta_axis"),
        py::arg("angles") = py::none(), py::arg("n") = 0,
        "Sample a phase-space function; axes are (lo, hi, count) tuples.");
    m.def(
        "oracle_bifrac_wigner",
        [](const bifrac::Mat& op, double alpha, double beta, double theta_alpha,
           double theta_beta) {
            return bifrac::oracle_bifrac_wigner(op, alpha, beta,
                                                angles_of(theta_alpha, theta_beta));
        },
        py::arg("op"), py::arg("alpha"), py::arg("beta"), py::arg("theta_alpha"),
        py::arg("theta_beta"), "Quadrature oracle for the interpolating transform.");

    m.def("verify_check_names", &bifrac::verify_check_names);
    m.def(
        "run_verify",
        [](int n, std::uint64_t seed, const std::string& only) {
            bifrac::VerifyConfig cfg;
            cfg.N = n;
            cfg.seed = seed;
            cfg.only = only;
            const auto results = bifrac::run_verify(cfg);
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["measured"] = r.measured;
                d["tolerance"] = r.tolerance;
                d["info"] = r.info;
                out.append(d);
            }
            return out;
        },
        py::arg("n") = 64, py::arg("seed") = 20250814ULL, py::arg("only") = std::string());
    m.def(
        "verify_report_json",
        [](int n, std::uint64_t seed, const std::string& only) {
            bifrac::VerifyConfig cfg;
            cfg.N = n;
            cfg.seed = seed;
            cfg.only = only;
            return bifrac::verify_report_json(cfg, bifrac::run_verify(cfg));
        },
        py::arg("n") = 64, py::arg("seed") = 20250814ULL, py::arg("only") = std::string());
}
