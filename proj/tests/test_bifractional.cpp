#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bifrac/bifractional.hpp"
#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"

using namespace bifrac;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("angle pairs reduce and reject the forbidden band") {
    const BifracAngles a(2.0 * kPi + 0.3, -2.0 * kPi + 0.1);
    CHECK(a.theta_alpha == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(a.theta_beta == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(BifracAngles(0.3, 0.3 - kPi / 2.0), ForbiddenBand);
    CHECK_NOTHROW(BifracAngles(0.3, 0.3 - kPi / 2.0 + 0.05));
    CHECK_THROWS_AS(BifracAngles(0.3, 0.3 - kPi / 2.0 + 0.05, 0.06), ForbiddenBand);
}

TEST_CASE("product parameters at exact values") {
    const BtoParams p = bto_params(0.0, 0.0, BifracAngles(kPi / 4.0, kPi / 4.0));
    CHECK(p.tau == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.sigma == 0.0);
    CHECK(p.phi == doctest::Approx(-kPi / 4.0).epsilon(1e-15));

    const BtoParams q = bto_params(1.0, 1.0, BifracAngles(0.3, 0.1));
    CHECK(q.tau == doctest::Approx(0.097314313040724974).epsilon(1e-14));
    CHECK(q.sigma == doctest::Approx(-6.3427015330307379).epsilon(1e-14));
    CHECK(q.phi == doctest::Approx(-5.0286540868248073).epsilon(1e-14));
}

TEST_CASE("product parameters reject poles") {
    CHECK_THROWS_AS(bto_params(1.0, 1.0, BifracAngles(kPi / 2.0, 0.3)), SpecialAngleNeedsLimit);
    CHECK_THROWS_AS(bto_params(0.5, 0.3, BifracAngles(0.4, 0.0)), SpecialAngleNeedsLimit);
    CHECK_NOTHROW(bto_params(0.5, 0.0, BifracAngles(0.4, 0.0)));
}

TEST_CASE("special pairs dispatch to exact operators") {
    const int N = 16;
    const double a = 1.0, b = 0.5;
    const OperatorResult r0 = bifrac_operator(a, b, BifracAngles(0.0, 0.0), N);
    CHECK(r0.path == OperatorPath::Special);
    CHECK((r0.op - displacement_reference(b, -a, N)).cwiseAbs().maxCoeff() == 0.0);
    const OperatorResult rh = bifrac_operator(a, b, BifracAngles(kPi / 2.0, kPi / 2.0), N);
    CHECK((rh.op - parity(a, b, N)).cwiseAbs().maxCoeff() == 0.0);
    const OperatorResult rp = bifrac_operator(a, b, BifracAngles(kPi, kPi), N);
    CHECK((rp.op - displacement_reference(-b, a, N)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((special_case_operator(a, b, SpecialPair::PI_PI, N) - displacement_reference(-b, a, N))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("path selection favors the split product when it converges") {
    CHECK(bifrac_operator(0.5, 0.5, BifracAngles(0.25, 0.15), 64).path == OperatorPath::SplitProduct);
    CHECK(bifrac_operator(0.5, 0.5, BifracAngles(1.2, 1.1), 64).path == OperatorPath::StableFactorization);
    CHECK(bifrac_operator(0.8, 0.6, BifracAngles(0.5, 0.0), 64).path == OperatorPath::AxisLimit);
    const double need = split_fock_requirement(BifracAngles(0.25, 0.15));
    CHECK(need > 0.0);
    CHECK(need < 64.0);
}

TEST_CASE("near-pole regular angles need a different route") {
    CHECK_THROWS_AS(bifrac_operator(1.0, 0.5, BifracAngles(kPi / 2.0 - 1e-7, 0.3), 16), SpecialAngleNeedsLimit);
}

TEST_CASE("operator is unitary on the trusted block") {
    const int N = 48;
    const Mat U = bifrac_operator(0.8, -0.6, BifracAngles(0.2, 0.1), N).op;
    const Mat G = U.adjoint() * U;
    CHECK((G.topLeftCorner(12, 12) - Mat::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("phase constant between product and integral conventions") {
    CHECK(std::abs(product_vs_integral_phase(BifracAngles(0.3, 0.2)) - cplx(1.0, 0.0)) < 1e-15);
    const cplx law = product_vs_integral_phase(BifracAngles(2.0, 0.3));
    CHECK(std::abs(law - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("fingerprint recovers the displacement") {
    const GaussianUnitary g = gaussian_fingerprint(displacement_reference(1.0, 0.5, 32));
    CHECK((g.S - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(g.d(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(g.d(1) == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(g.residual < 1e-6);
    Mat kerr = Mat::Zero(32, 32);
    for (int n = 0; n < 32; ++n) kerr(n, n) = std::exp(cplx(0.0, 0.3 * n * n));
    CHECK_THROWS_AS(gaussian_fingerprint(kerr), NotGaussian);
}

TEST_CASE("heisenberg closed form is symplectic") {
    Eigen::Matrix2d S;
    Eigen::Vector2d d;
    heisenberg_action(0.7, -0.3, BifracAngles(0.4, 0.25), S, d);
    CHECK(S.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    heisenberg_action(2.0, 2.0, BifracAngles(1.0, 0.0), S, d);
    const double t = std::tan(1.0);
    CHECK(S(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(S(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(S(1, 0) == doctest::Approx(2.0 * t).epsilon(1e-12));
    CHECK(d(0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}
