#include <cmath>
#include <complex>

#include "doctest.h"

#include "bifrac/errors.hpp"
#include "bifrac/fock.hpp"

using namespace bifrac;

TEST_CASE("ladder matrix elements") {
    auto [a, adag] = ladder_ops(8);
    for (int n = 1; n < 8; ++n) {
        CHECK(a(n - 1, n) == cplx(std::sqrt(static_cast<double>(n)), 0.0));
        CHECK(adag(n, n - 1) == cplx(std::sqrt(static_cast<double>(n)), 0.0));
    }
    const Mat comm = a * adag - adag * a;
    CHECK((comm.topLeftCorner(7, 7) - Mat::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(ladder_ops(4).first.rows() == 4);
    CHECK_THROWS_AS(ladder_ops(1), DimTooSmall);
}

TEST_CASE("quadratures are hermitian with canonical commutator") {
    auto [x, p] = quadrature_ops(12);
    CHECK((x - x.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const Mat comm = x * p - p * x;
    CHECK((comm.topLeftCorner(11, 11) - cplx(0, 1) * Mat::Identity(11, 11)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("matrix exponential basics") {
    Mat nil = Mat::Zero(2, 2);
    nil(0, 1) = 1.0;
    Mat want = Mat::Identity(2, 2);
    want(0, 1) = 1.0;
    CHECK((matrix_exp(nil) - want).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(matrix_exp(400.0 * Mat::Identity(2, 2)), Overflow);
    // Anti-Hermitian input stays unitary at any scale.
    Mat skew(2, 2);
    skew << cplx(0, 500), cplx(3, 4), cplx(-3, 4), cplx(0, -200);
    const Mat U = matrix_exp(skew);
    CHECK((U.adjoint() * U - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("displacement vacuum column is poissonian") {
    const Mat D = displacement_reference(1.0, 0.5, 32);
    CHECK(std::abs(D(0, 0) - cplx(std::exp(-0.625), 0.0)) < 1e-15);
    const cplx lam(1.0, 0.5);
    cplx amp = D(0, 0);
    for (int n = 1; n < 8; ++n) {
        amp *= lam / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(D(n, 0) - amp) < 1e-14);
    }
    CHECK(D.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("displacement routes agree on the trusted block") {
    const Mat a = displacement(0.7, -0.4, 32);
    const Mat b = displacement_reference(0.7, -0.4, 32);
    CHECK((a.topLeftCorner(8, 8) - b.topLeftCorner(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("displacement group law") {
    const int N = 32;
    const Mat prod = displacement_reference(0.6, 0.3, N) * displacement_reference(-0.2, 0.5, N);
    const cplx phase = std::exp(cplx(0.0, 0.3 * -0.2 - 0.6 * 0.5));
    const Mat want = phase * displacement_reference(0.4, 0.8, N);
    CHECK((prod.topLeftCorner(8, 8) - want.topLeftCorner(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parity relations") {
    const int N = 16;
    const Mat P = parity(N);
    CHECK((P * P - Mat::Identity(N, N)).cwiseAbs().maxCoeff() == 0.0);
    auto [a, adag] = ladder_ops(N);
    CHECK((P * a * P + a).cwiseAbs().maxCoeff() == 0.0);
    const Mat PD = parity(1.0, 0.5, N);
    // Hermitian up to recurrence roundoff in the displacement columns.
    CHECK((PD - PD.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("truncation reports flag runaway displacements") {
    CHECK(state_report(displacement_reference(1.0, 0.5, 32).col(0)).trusted);
    CHECK_FALSE(state_report(displacement_reference(5.0, 5.0, 32).col(0)).trusted);
    CHECK(operator_report(displacement_reference(1.0, 0.5, 32)).trusted);
    CHECK_FALSE(operator_report(displacement_reference(5.0, 5.0, 32)).trusted);
    CHECK_THROWS_AS(state_report(Vec::Zero(1)), DimTooSmall);
}
