#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bifrac/errors.hpp"
#include "bifrac/fracft.hpp"

using namespace bifrac;

namespace {
constexpr double kPi = std::numbers::pi;

SampledFunction gauss(double lo, double hi, int count) {
    return sample_function(lo, hi, count, [](double x) { return cplx(std::pow(kPi, -0.25) * std::exp(-0.5 * x * x), 0.0); });
}
}  // namespace

TEST_CASE("kernel takes the principal branch") {
    CHECK(std::abs(kernel_value(1.0, 1.0, kPi / 4.0) - cplx(0.32817460928682386, 0.34260838410452979)) < 1e-14);
    CHECK(std::abs(kernel_value(1.0, 2.0, kPi / 2.0) - cplx(-0.16601856795395925, 0.36275718902099232)) < 1e-14);
    CHECK(std::abs(kernel_value(0.0, 0.0, kPi / 2.0) - cplx(1.0 / std::sqrt(2.0 * kPi), 0.0)) < 1e-15);
    // Modulus depends only on the angle.
    CHECK(std::abs(kernel_value(0.7, -2.1, 0.9)) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * kPi * std::sin(0.9))).epsilon(1e-13));
}

TEST_CASE("kernel rejects collapsed angles") {
    CHECK_THROWS_AS(kernel_value(0.0, 0.0, 0.0), SpecialAngle);
    CHECK_THROWS_AS(kernel_value(1.0, 1.0, kPi), SpecialAngle);
    CHECK_THROWS_AS(kernel_value(1.0, 1.0, 2.0 * kPi), SpecialAngle);
    CHECK_THROWS_AS(compose_kernels(0.5, kPi - 0.5, 1.0, 1.0), SpecialAngle);
}

TEST_CASE("angle reduction and classification") {
    CHECK(classify_angle(0.0) == AngleClass::Zero);
    CHECK(classify_angle(2.0 * kPi) == AngleClass::Zero);
    CHECK(classify_angle(kPi) == AngleClass::Pi);
    CHECK(classify_angle(kPi / 2.0) == AngleClass::HalfPi);
    CHECK(classify_angle(-kPi / 2.0) == AngleClass::MinusHalfPi);
    CHECK(classify_angle(1.5708) == AngleClass::Regular);
    CHECK(reduce_angle(3.0 * kPi) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(reduce_angle(-kPi) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("grid coordinates mirror exactly") {
    CHECK(blend_coord(-3.0, 3.0, 61, 30) == 0.0);
    for (int i = 0; i < 61; ++i) CHECK(blend_coord(-3.0, 3.0, 61, i) == -blend_coord(-3.0, 3.0, 61, 60 - i));
    const SampledFunction f = gauss(-4.0, 5.0, 33);
    CHECK_FALSE(f.symmetric());
    CHECK(gauss(-4.0, 4.0, 33).symmetric());
}

TEST_CASE("sampled gaussian has unit norm") {
    CHECK(gauss(-8.0, 8.0, 513).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero angle acts as the identity") {
    const SampledFunction f = gauss(-8.0, 8.0, 257);
    const SampledFunction g = apply_fracft(f, 0.0);
    for (int i = 0; i < f.count(); ++i)
        CHECK(std::abs(g.values[static_cast<std::size_t>(i)] - f.values[static_cast<std::size_t>(i)]) < 1e-14);
}

TEST_CASE("quarter turn fixes the gaussian") {
    const SampledFunction f = gauss(-8.0, 8.0, 513);
    const SampledFunction g = apply_fracft(f, kPi / 2.0);
    double worst = 0.0;
    for (int i = 0; i < f.count(); ++i)
        worst = std::max(worst, std::abs(g.values[static_cast<std::size_t>(i)] - f.values[static_cast<std::size_t>(i)]));
    CHECK(worst < 1e-9);
}

TEST_CASE("asymmetric grids are rejected at exact angles") {
    const SampledFunction f = gauss(-4.0, 5.0, 33);
    CHECK_THROWS_AS(apply_fracft(f, kPi), AsymmetricGrid);
}

TEST_CASE("non-decaying samples are rejected") {
    const SampledFunction f = sample_function(-6.0, 6.0, 129, [](double) { return cplx(1.0, 0.0); });
    CHECK_THROWS_AS(apply_fracft(f, 0.7), TailTooFat);
}

TEST_CASE("kernel composition reproduces the closed form") {
    const cplx got = compose_kernels(0.3, 0.4, 0.5, -0.2);
    const cplx want = kernel_value(0.5, -0.2, 0.7);
    CHECK(std::abs(got - want) < 1e-5);
}
