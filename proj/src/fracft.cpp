#include "bifrac/fracft.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bifrac/parallel.hpp"

namespace bifrac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double reduce_angle(double theta) {
    double t = std::remainder(theta, kTwoPi);  // lands in [-pi, pi]
    if (t <= -kPi) t = kPi;
    return t;
}

AngleClass classify_angle(double theta, double eps) {
    const double t = reduce_angle(theta);
    if (std::abs(t) < eps) return AngleClass::Zero;
    if (std::abs(t - 0.5 * kPi) < eps) return AngleClass::HalfPi;
    if (std::abs(t + 0.5 * kPi) < eps) return AngleClass::MinusHalfPi;
    if (std::abs(t - kPi) < eps || std::abs(t + kPi) < eps) return AngleClass::Pi;
    return AngleClass::Regular;
}

bool SampledFunction::symmetric() const {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    return std::abs(lo + hi) <= 1e-12 * scale;
}

double SampledFunction::norm() const {
    const int M = count();
    const double h = step();
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
        const double w = (i == 0 || i == M - 1) ? 0.5 : 1.0;
        s += w * std::norm(values[static_cast<std::size_t>(i)]);
    }
    return std::sqrt(h * s);
}

cplx kernel_value(double x, double y, double theta) {
    switch (classify_angle(theta)) {
        case AngleClass::Zero:
        case AngleClass::Pi:
            throw SpecialAngle("kernel is distributional at theta in {0, pi}, no pointwise value");
        case AngleClass::HalfPi:
            return std::exp(cplx(0.0, x * y)) / std::sqrt(kTwoPi);
        case AngleClass::MinusHalfPi:
            return std::exp(cplx(0.0, -x * y)) / std::sqrt(kTwoPi);
        case AngleClass::Regular:
            break;
    }
    const double t = reduce_angle(theta);
    const double ct = std::cos(t) / std::sin(t);
    const double inv_s = 1.0 / std::sin(t);
    const cplx pref = std::sqrt(cplx(1.0, ct) / kTwoPi);  // principal branch
    return pref * std::exp(cplx(0.0, -0.5 * (x * x + y * y) * ct + x * y * inv_s));
}

SampledFunction apply_fracft(const SampledFunction& f, double theta) {
    const int M = f.count();
    if (M < 2) throw DimTooSmall("apply_fracft: sampled function needs at least 2 points");

    const AngleClass cls = classify_angle(theta);
    if (cls == AngleClass::Zero) return f;
    if (cls == AngleClass::Pi) {
        if (!f.symmetric())
            throw AsymmetricGrid("apply_fracft: theta = pi reversal needs a grid symmetric about 0");
        SampledFunction g = f;
        std::reverse(g.values.begin(), g.values.end());
        return g;
    }

    double peak = 0.0;
    for (const cplx& v : f.values) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (peak > 0.0 && edge > 1e-8 * peak) {
        std::ostringstream os;
        os << "apply_fracft: boundary value " << edge / peak
           << " of peak exceeds the 1e-8 decay precondition";
        throw TailTooFat(os.str());
    }

    const double h = f.step();
    SampledFunction g;
    g.lo = f.lo;
    g.hi = f.hi;
    g.values.assign(static_cast<std::size_t>(M), cplx(0.0, 0.0));
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
        const double xi = f.x(static_cast<int>(i));
        cplx acc(0.0, 0.0);
        for (int j = 0; j < M; ++j) {
            const double w = (j == 0 || j == M - 1) ? 0.5 : 1.0;
            acc += w * kernel_value(xi, f.x(j), theta) * f.values[static_cast<std::size_t>(j)];
        }
        g.values[i] = h * acc;
    });
    return g;
}

namespace {

// Trapezoid of the damped composition integrand over [-Y, Y] with a doubling
// certificate.
cplx damped_compose(double t1, double t2, double x, double z, double eps, double Y, int m0,
                    int max_doublings, double tol) {
    auto level = [&](int M) {
        const double h = 2.0 * Y / (M - 1);
        cplx acc(0.0, 0.0);
        for (int j = 0; j < M; ++j) {
            const double y = blend_coord(-Y, Y, M, j);
            const double w = (j == 0 || j == M - 1) ? 0.5 : 1.0;
            acc += w * kernel_value(x, y, t1) * kernel_value(y, z, t2) *
                   std::exp(-eps * y * y);
        }
        return h * acc;
    };
    int M = m0;
    cplx prev = level(M);
    for (int d = 0; d < max_doublings; ++d) {
        M = 2 * M - 1;
        const cplx cur = level(M);
        if (std::abs(cur - prev) <= 0.05 * tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << "compose_kernels: damped integral (eps=" << eps << ") did not settle after "
       << max_doublings << " doublings";
    throw QuadratureDivergence(os.str());
}

}  // namespace

cplx compose_kernels(double theta1, double theta2, double x, double z,
                     const QuadratureSettings& quadrature) {
    const double sum = theta1 + theta2;
    for (double t : {theta1, theta2, sum}) {
        if (classify_angle(t) != AngleClass::Regular)
            throw SpecialAngle("compose_kernels: theta1, theta2, theta1+theta2 must all be regular");
    }
    // Composition integrand oscillates as exp(i a y^2 + i b y) with
    // a = -sin(t1+t2) / (2 sin t1 sin t2); the damping ladder must stay well
    // inside |a|, the analyticity radius in the damping parameter.
    const double a =
        -std::sin(reduce_angle(sum)) / (2.0 * std::sin(reduce_angle(theta1)) * std::sin(reduce_angle(theta2)));
    const double eps0 = std::min(0.5, std::abs(a) / 4.0);
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-6;
    const int m0 = quadrature.base_points > 0 ? quadrature.base_points : 2049;

    constexpr int kNodes = 6;
    std::array<double, kNodes> eps{};
    std::array<cplx, kNodes> val{};
    for (int k = 0; k < kNodes; ++k) {
        eps[static_cast<std::size_t>(k)] = eps0 / static_cast<double>(1 << k);
        const double Y = quadrature.half_width > 0.0
                             ? quadrature.half_width
                             : std::sqrt(37.0 / eps[static_cast<std::size_t>(k)]);
        val[static_cast<std::size_t>(k)] = damped_compose(theta1, theta2, x, z,
                                                          eps[static_cast<std::size_t>(k)], Y, m0,
                                                          quadrature.max_doublings, tol);
    }

    // Neville extrapolation of the damped values to eps = 0.
    std::array<cplx, kNodes> T = val;
    cplx second(0.0, 0.0);
    for (int lev = 1; lev < kNodes; ++lev) {
        for (int i = kNodes - 1; i >= lev; --i) {
            if (lev == kNodes - 1 && i == kNodes - 1) second = T[kNodes - 1];
            T[static_cast<std::size_t>(i)] =
                (eps[static_cast<std::size_t>(i - lev)] * T[static_cast<std::size_t>(i)] -
                 eps[static_cast<std::size_t>(i)] * T[static_cast<std::size_t>(i - 1)]) /
                (eps[static_cast<std::size_t>(i - lev)] - eps[static_cast<std::size_t>(i)]);
        }
    }
    const cplx result = T[kNodes - 1];
    if (std::abs(result - second) > tol * (1.0 + std::abs(result))) {
        std::ostringstream os;
        os << "compose_kernels: extrapolation certificate " << std::abs(result - second)
           << " above tolerance " << tol;
        throw QuadratureDivergence(os.str());
    }
    return result;
}

}  // namespace bifrac
