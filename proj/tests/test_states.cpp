#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"
#include "bifrac/states.hpp"

using namespace bifrac;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("glauber family at the half-pi pair") {
    const int N = 32;
    const Vec amps = coherent_amplitudes(1.0, 0.5, BifracAngles(kPi / 2.0, kPi / 2.0), N);
    const cplx lam(1.0, 0.5);
    cplx want = std::exp(cplx(-0.5 * std::norm(lam), 0.0));
    for (int n = 0; n < 12; ++n) {
        CHECK(std::abs(amps(n) - want) < 1e-14);
        want *= lam / std::sqrt(n + 1.0);
    }
}

TEST_CASE("closed amplitudes match the operator column") {
    const int N = 48;
    const BifracAngles ang(0.3, 0.2);
    const StateResult s = bifrac_coherent(0.8, -0.5, ang, N);
    const Vec closed = coherent_amplitudes(0.8, -0.5, ang, N);
    CHECK((s.state.head(12) - closed.head(12)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.report.trusted);
}

TEST_CASE("centered states are squeezed vacua") {
    const Vec amps = coherent_amplitudes(0.0, 0.0, BifracAngles(0.5, 0.2), 32);
    for (int n = 1; n < 32; n += 2) CHECK(std::abs(amps(n)) < 1e-14);
}

TEST_CASE("bargmann parameters at pinned values") {
    const BargmannParams p = bargmann_params(2.0, 2.0, 0.6);
    CHECK(std::abs(p.A - cplx(-0.15941056138083161, 0.23300977149180659)) < 1e-15);
    CHECK(std::abs(p.B - cplx(3.1292849467900707, -1.6506712298193566)) < 1e-14);
    CHECK(p.Gamma == cplx(-4.0, 0.0));
    CHECK(p.prefactor == doctest::Approx(std::sqrt(std::cos(0.6))).epsilon(1e-15));
    CHECK_THROWS_AS(bargmann_params(1.0, 1.0, 0.0), SpecialAngleNeedsLimit);
    CHECK_THROWS_AS(bargmann_params(1.0, 1.0, kPi), SpecialAngleNeedsLimit);
}

TEST_CASE("bargmann value at zero is the vacuum amplitude") {
    const BargmannParams p = bargmann_params(1.0, 0.5, 0.7);
    const Vec amps = coherent_amplitudes(1.0, 0.5, BifracAngles(0.7, 0.0), 8);
    CHECK(std::abs(bargmann_eval(cplx(0.0, 0.0), p) - amps(0)) < 1e-14);
}

TEST_CASE("squeeze data inverts the bargmann exponent") {
    const BargmannParams p = bargmann_params(2.0, 2.0, 0.6);
    const SqueezeParams sq = squeeze_from_bargmann(p);
    CHECK(std::abs(sq.w - cplx(3.7915302457080180, -2.0)) < 1e-12);
    CHECK(sq.r == doctest::Approx(1.2792450316155290).epsilon(1e-13));
    CHECK(sq.phi_sq == doctest::Approx(0.97079632679489668).epsilon(1e-13));
    CHECK(std::abs(squeeze_bargmann(sq, cplx(0.4, -0.3)) - bargmann_eval(cplx(0.4, -0.3), p)) < 1e-11);
    // |2A| >= 1 has no normalizable squeezed form.
    BargmannParams bad = p;
    bad.A = cplx(0.6, 0.0);
    CHECK_THROWS_AS(squeeze_from_bargmann(bad), DegenerateGaussian);
}

TEST_CASE("wavefunction closed form matches its integral form") {
    const BargmannParams p = bargmann_params(2.0, 2.0, 0.6);
    for (const double x : {-1.0, 0.0, 1.0})
        CHECK(std::abs(wavefunction(x, p) - wavefunction_integral(x, p)) < 1e-8);
    CHECK(wavefunction_norm(p) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("moments keep sigma_xx pinned at one half") {
    const Moments m = moments_from_wavefunction(bargmann_params(2.0, 2.0, 0.6));
    CHECK(m.sxx == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(m.mean_x == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(m.sxx * m.spp - m.sxp * m.sxp == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("photon statistics of a centered squeezed state") {
    const PhotonStats st = photon_stats(bargmann_params(0.0, 0.0, 0.8), 40);
    CHECK(std::abs(st.a_n[1]) < 1e-15);
    CHECK(std::abs(st.a_n[3]) < 1e-15);
    CHECK(st.mean_n > 0.0);
    CHECK(st.g2 > 3.0);
    CHECK(st.norm_captured == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("vacuum photon statistics give nan g2") {
    const BargmannParams vac{};  // B(z) = 1: exactly the vacuum
    const PhotonStats st = photon_stats(vac, 10);
    CHECK(st.mean_n == 0.0);
    CHECK(st.norm_captured == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::isnan(st.g2));
}

TEST_CASE("sweep rows are indexed, not accumulated") {
    const auto rows = sweep_stats(2.0, 2.0, 0.05, 0.25, 0.05);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().theta_alpha == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(rows.back().theta_alpha == doctest::Approx(0.25).epsilon(1e-12));
    for (const auto& r : rows) CHECK(std::abs(r.rs_defect) < 1e-6);
}

TEST_CASE("analysis coefficient against a direct overlap") {
    const int N = 24;
    const BifracAngles ang(kPi / 2.0, kPi / 2.0);
    Vec g = Vec::Zero(N);
    g(1) = 1.0;
    const cplx c = analysis_coefficients(g, 0.7, -0.2, ang, N);
    const Vec bra = coherent_amplitudes(0.7, -0.2, ang, N);
    CHECK(std::abs(c - bra.dot(g) / (2.0 * kPi)) < 1e-15);
}
