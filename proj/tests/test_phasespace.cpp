#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"
#include "bifrac/phasespace.hpp"

using namespace bifrac;

namespace {
constexpr double kPi = std::numbers::pi;

Mat projector(int n, int N) {
    Vec v = Vec::Zero(N);
    v(n) = 1.0;
    return v * v.adjoint();
}
}  // namespace

TEST_CASE("axis coordinates mirror") {
    const Axis ax{-2.0, 2.0, 9};
    CHECK(ax.coord(4) == 0.0);
    CHECK(ax.coord(0) == -2.0);
    CHECK(ax.coord(8) == 2.0);
    for (int i = 0; i < 9; ++i) CHECK(ax.coord(i) == -ax.coord(8 - i));
}

TEST_CASE("weyl values of the lowest fock states") {
    const Axis ax{-2.0, 2.0, 5};
    const PhaseSpaceGrid g0 = weyl_function(projector(0, 24), ax, ax);
    CHECK(std::abs(g0.at(2, 2) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(g0.at(3, 2) - cplx(std::exp(-0.5), 0.0)) < 1e-14);
    const PhaseSpaceGrid g1 = weyl_function(projector(1, 24), ax, ax);
    CHECK(std::abs(g1.at(3, 2)) < 1e-14);
    CHECK(std::abs(g1.at(3, 3) - cplx(-std::exp(-1.0), 0.0)) < 1e-14);
    CHECK(g0.kind == GridKind::WEYL);
    CHECK_FALSE(g0.angles.has_value());
}

TEST_CASE("wigner values of the lowest fock states") {
    const Axis ax{-1.0, 1.0, 3};
    const PhaseSpaceGrid g0 = wigner_function(projector(0, 24), ax, ax);
    CHECK(std::abs(g0.at(1, 1) - cplx(1.0, 0.0)) < 1e-14);
    const PhaseSpaceGrid g1 = wigner_function(projector(1, 24), ax, ax);
    CHECK(std::abs(g1.at(1, 1) - cplx(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("interpolating grid reduces to weyl at the zero pair") {
    const Axis ax{-2.0, 2.0, 5};
    const Mat op = projector(1, 24);
    const PhaseSpaceGrid w = weyl_function(op, ax, ax);
    const PhaseSpaceGrid b = bifrac_wigner_grid(op, ax, ax, BifracAngles(0.0, 0.0), 24);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(b.at(i, j) == w.at(j, 4 - i));
    CHECK(b.kind == GridKind::BIFRAC_WIGNER);
    REQUIRE(b.angles.has_value());
    CHECK(b.angles->theta_alpha == 0.0);
}

TEST_CASE("q values of the vacuum") {
    const Axis ax{-3.0, 3.0, 7};
    const PhaseSpaceGrid g = q_function(projector(0, 24), ax, ax, BifracAngles(kPi / 2.0, kPi / 2.0), 24);
    CHECK(std::abs(g.at(3, 3) - cplx(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(g.at(4, 3) - cplx(std::exp(-1.0), 0.0)) < 1e-13);
    for (const cplx v : g.values) {
        CHECK(v.real() >= -1e-12);
        CHECK(std::abs(v.imag()) < 1e-12);
    }
    CHECK(g.kind == GridKind::Q);
}

TEST_CASE("fourier relation between the two exact ends") {
    const auto [lhs, rhs] = fourier_relation_check(projector(0, 24), 0.0, 0.0);
    CHECK(std::abs(lhs - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-4);
}

TEST_CASE("thermal p function is a wide gaussian") {
    const int N = 160;
    Mat rho = Mat::Zero(N, N);
    double w = 0.5;
    for (int n = 0; n < N; ++n) {
        rho(n, n) = w;
        w *= 0.5;
    }
    const cplx p0 = bifrac_p_function(rho, 0.0, 0.0, BifracAngles(kPi / 2.0, kPi / 2.0), {}, N);
    CHECK(std::abs(p0 - cplx(1.0, 0.0)) < 2e-3);
}

TEST_CASE("vacuum p function is refused") {
    CHECK_THROWS_AS(bifrac_p_function(projector(0, 24), 0.0, 0.0, BifracAngles(kPi / 2.0, kPi / 2.0), {}, 24),
                    PNotSmooth);
}
