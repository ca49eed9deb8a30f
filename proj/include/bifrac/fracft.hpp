#pragma once

#include <complex>
#include <vector>

#include "bifrac/errors.hpp"

namespace bifrac {

using cplx = std::complex<double>;

inline constexpr double kAngleEps = 1e-9;

enum class AngleClass { Regular, Zero, HalfPi, Pi, MinusHalfPi };

// Reduce an angle to (-pi, pi].
double reduce_angle(double theta);

// Classify against the special values {0, pi/2, pi, -pi/2} within eps,
// after reduction. pi and -pi are the same special value.
AngleClass classify_angle(double theta, double eps = kAngleEps);

// Endpoint-blended uniform coordinate: exactly lo at i=0 and hi at i=count-1,
// and exactly sign-symmetric (x_{count-1-i} == -x_i bitwise) when hi == -lo.
inline double blend_coord(double lo, double hi, int count, int i) {
    return (lo * static_cast<double>(count - 1 - i) + hi * static_cast<double>(i)) /
           static_cast<double>(count - 1);
}

// A complex function sampled on a uniform lattice of `count` points from lo to hi.
struct SampledFunction {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<cplx> values;

    int count() const { return static_cast<int>(values.size()); }
    double step() const { return (hi - lo) / static_cast<double>(count() - 1); }
    double x(int i) const { return blend_coord(lo, hi, count(), i); }
    bool symmetric() const;
    // Trapezoid L2 norm sqrt(h * sum w_i |f_i|^2), w = 1/2 at the ends.
    double norm() const;
};

template <typename F>
SampledFunction sample_function(double lo, double hi, int count, F&& fn) {
    SampledFunction s;
    s.lo = lo;
    s.hi = hi;
    s.values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) s.values[static_cast<std::size_t>(i)] = fn(blend_coord(lo, hi, count, i));
    return s;
}

// Integral-transform kernel
//   K(x, y; theta) = sqrt((1 + i*cot(theta)) / (2*pi))
//                    * exp(-i*(x^2 + y^2)*cot(theta)/2 + i*x*y/sin(theta)),
// principal square-root branch. At theta = +-pi/2 the formula degenerates to
// the exact Fourier kernels exp(+-i*x*y)/sqrt(2*pi), which are returned
// directly; theta in {0, pi} is distributional and throws SpecialAngle.
cplx kernel_value(double x, double y, double theta);

struct QuadratureSettings {
    double half_width = 0.0;  // 0 = operation-specific default
    int base_points = 0;      // 0 = operation-specific default
    int max_doublings = 12;
    double tol = 0.0;         // 0 = operation-specific default
};

// Fractional transform of a sampled function, same output grid.
// Regular theta: trapezoid quadrature against kernel_value.
// Special cases: theta=0 identity, theta=+-pi/2 Fourier kernels,
// theta=pi index reversal (requires a grid symmetric about 0).
SampledFunction apply_fracft(const SampledFunction& f, double theta);

// Numerically evaluates integral dy K(x,y;theta1) K(y,z;theta2), which must
// reproduce kernel_value(x, z, theta1+theta2). Pure-oscillatory integral:
// evaluated with Gaussian damping exp(-eps*y^2) at a ladder of eps values,
// each integral trapezoid-doubled to convergence, then extrapolated to eps=0.
cplx compose_kernels(double theta1, double theta2, double x, double z,
                     const QuadratureSettings& quadrature = {});

}  // namespace bifrac
