// Acceptance gate. Prints one line per shipping criterion and exits nonzero
// if any criterion fails. Criterion 3 compares a freshly computed statistics
// sweep against the committed baseline CSV (path in argv[1]).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bifrac/bifractional.hpp"
#include "bifrac/fock.hpp"
#include "bifrac/fracft.hpp"
#include "bifrac/states.hpp"
#include "bifrac/verify.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Runs the named registered checks one by one; fails fast with a detail line.
bool checks_pass(const std::vector<std::string>& names, std::string& detail) {
    for (const std::string& name : names) {
        bifrac::VerifyConfig cfg;
        cfg.only = name;
        const auto results = bifrac::run_verify(cfg);
        bool found = false;
        for (const auto& r : results) {
            if (r.name != name) continue;
            found = true;
            if (!r.pass) {
                std::ostringstream os;
                os << name << ": measured " << r.measured << " vs tolerance " << r.tolerance;
                if (!r.info.empty()) os << " (" << r.info << ")";
                detail = os.str();
                return false;
            }
        }
        if (!found) {
            detail = name + ": check not registered";
            return false;
        }
    }
    return true;
}

bool baseline_matches(const std::string& path, std::string& detail) {
    std::ifstream in(path);
    if (!in) {
        detail = "baseline file missing: " + path;
        return false;
    }
    std::string header;
    std::getline(in, header);
    if (header != "theta_alpha,sigma_pp,mean_n,g2,norm_captured") {
        detail = "baseline header mismatch: " + header;
        return false;
    }
    const auto rows = bifrac::sweep_stats(2.0, 2.0, 0.05, 1.45, 0.05, 30);
    if (rows.size() != 29) {
        std::ostringstream os;
        os << "sweep produced " << rows.size() << " rows, expected 29";
        detail = os.str();
        return false;
    }
    std::size_t i = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (i >= rows.size()) {
            detail = "baseline has more rows than the sweep";
            return false;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.5g,%.5g,%.5g,%.5g,%.5g", rows[i].theta_alpha,
                      rows[i].sigma_pp, rows[i].mean_n, rows[i].g2, rows[i].norm_captured);
        double got[5] = {}, want[5] = {};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &got[0], &got[1], &got[2], &got[3],
                        &got[4]) != 5 ||
            std::sscanf(buf, "%lf,%lf,%lf,%lf,%lf", &want[0], &want[1], &want[2], &want[3],
                        &want[4]) != 5) {
            std::ostringstream os;
            os << "unparseable baseline row " << i + 1 << ": " << line;
            detail = os.str();
            return false;
        }
        for (int k = 0; k < 5; ++k) {
            const double rel = std::abs(got[k] - want[k]) / std::max(1.0, std::abs(want[k]));
            if (!(rel <= 1e-9)) {
                std::ostringstream os;
                os << "row " << i + 1 << " column " << k + 1 << ": baseline " << got[k]
                   << " vs recomputed " << want[k];
                detail = os.str();
                return false;
            }
        }
        ++i;
    }
    if (i != rows.size()) {
        std::ostringstream os;
        os << "baseline has " << i << " rows, sweep has " << rows.size();
        detail = os.str();
        return false;
    }
    return true;
}

// Direct test of the flat-measure Q normalization (1/2pi) integral Q = Tr Theta.
bool q_mass_literal(std::string& detail) {
    const int N = 32;
    const int M = 101;
    const double L = 5.0;
    const double h = 2.0 * L / (M - 1);

    std::vector<bifrac::Mat> ops;
    ops.push_back(bifrac::Mat::Zero(N, N));
    ops.back()(0, 0) = 1.0;
    ops.push_back(bifrac::Mat::Zero(N, N));
    ops.back()(1, 1) = 1.0;
    const bifrac::Vec d0 = bifrac::displacement_reference(1.0, 0.5, N).col(0);
    ops.push_back(d0 * d0.adjoint());

    const double pairs[2][2] = {{0.5 * kPi, 0.5 * kPi}, {0.6, 0.3}};
    std::ostringstream ratios;
    bool ok = true;
    for (const auto& pr : pairs) {
        const bifrac::BifracAngles angles(pr[0], pr[1]);
        double mass[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < M; ++i) {
            const double a = bifrac::blend_coord(-L, L, M, i);
            const double wi = (i == 0 || i == M - 1) ? 0.5 : 1.0;
            for (int j = 0; j < M; ++j) {
                const double b = bifrac::blend_coord(-L, L, M, j);
                const double wj = (j == 0 || j == M - 1) ? 0.5 : 1.0;
                const bifrac::Vec psi = bifrac::coherent_amplitudes(a, b, angles, N);
                for (int k = 0; k < 3; ++k)
                    mass[k] += wi * wj * std::real(psi.dot(ops[static_cast<std::size_t>(k)] * psi));
            }
        }
        for (int k = 0; k < 3; ++k) {
            const double ratio = mass[k] * h * h / (2.0 * kPi);  // trace of each op is 1
            if (std::abs(ratio - 1.0) > 1e-3) ok = false;
            if (k == 0) {
                ratios << (ratios.tellp() > 0 ? "; " : "") << "(1/2pi) mass / trace = " << ratio
                       << " at angles (" << pr[0] << ", " << pr[1] << ")";
            }
        }
    }
    if (!ok) {
        ratios << "; the integral tracks pi * |cos(ta - tb)| * trace instead";
        detail = ratios.str();
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string baseline_path =
        argc > 1 ? std::string(argv[1]) : std::string("data/fig1_computed_baseline.csv");

    int failed = 0;
    std::string failed_ids;
    auto report = [&](int id, const char* label, bool pass, const std::string& detail,
                      double runtime = -1.0) {
        std::printf("[%s] criterion %02d: %s", pass ? "PASS" : "FAIL", id, label);
        if (runtime >= 0.0) std::printf(" (%.1fs)", runtime);
        if (!pass && !detail.empty()) std::printf(" -- %s", detail.c_str());
        std::printf("\n");
        std::fflush(stdout);
        if (!pass) {
            ++failed;
            failed_ids += (failed_ids.empty() ? "" : " ") + std::to_string(id);
        }
    };

    std::string d;

    d.clear();
    {
        Timer t;
        bool ok = checks_pass({"uncertainty_saturation"}, d);
        const double rt = t.secs();
        if (ok && rt >= 30.0) {
            ok = false;
            d = "runtime budget of 30 s exceeded";
        }
        report(1, "uncertainty product stays at the 1/4 bound across the angle sweep", ok, d, rt);
    }

    d.clear();
    report(2, "closed-form moments match operator quadrature identities",
           checks_pass({"analytic_moment_identities"}, d), d);

    d.clear();
    {
        bool ok = checks_pass({"photon_statistics_claims"}, d);
        if (ok) ok = baseline_matches(baseline_path, d);
        report(3, "photon statistics sweep matches the committed baseline and claim structure", ok,
               d);
    }

    d.clear();
    report(4, "sigma_xp^2 equals sigma_pp/2 - 1/4 along the sweep",
           checks_pass({"sigma_xp_relation"}, d), d);

    d.clear();
    report(5, "special angle pairs reduce to displacement/parity forms and grid relabelings",
           checks_pass({"special_pair_dispatch", "bifrac_wigner_special_grids",
                        "q_relabel_identity"},
                       d),
           d);

    d.clear();
    {
        Timer t;
        bool ok = checks_pass({"bifrac_vs_integral_oracle"}, d);
        const double rt = t.secs();
        if (ok && rt >= 600.0) {
            ok = false;
            d = "runtime budget of 600 s exceeded";
        }
        report(6, "operator matches its defining double-kernel integral", ok, d, rt);
    }

    d.clear();
    report(7, "operators are unitary and the adjoint negates all four parameters",
           checks_pass({"bifrac_unitarity", "bifrac_adjoint"}, d), d);

    d.clear();
    report(8, "kernel composition reproduces the summed-angle kernel on random pairs",
           checks_pass({"fracft_composition_random"}, d), d);

    d.clear();
    report(9, "conjugation action of the operator lands in the affine symplectic group",
           checks_pass({"fingerprint_group_membership"}, d), d);

    d.clear();
    report(10, "flat-measure Q mass equals the operator trace with constant 1/(2pi)",
           q_mass_literal(d), d);

    d.clear();
    report(11, "Bargmann parameters invert to the squeezed-state normal form",
           checks_pass({"squeeze_correspondence"}, d), d);

    d.clear();
    report(12, "position wavefunction agrees with its Bargmann-transform integral",
           checks_pass({"wavefunction_dual_form"}, d), d);

    if (failed == 0)
        std::printf("acceptance: 12/12 criteria passed\n");
    else
        std::printf("acceptance: %d/12 criteria passed (failing: %s)\n", 12 - failed,
                    failed_ids.c_str());
    return failed == 0 ? 0 : 1;
}
