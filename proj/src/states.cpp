#include "bifrac/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "bifrac/parallel.hpp"

namespace bifrac {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

cplx SqueezeParams::a() const { return -std::tanh(0.5 * r) * std::exp(cplx(0.0, -phi_sq)); }
cplx SqueezeParams::b() const { return w * std::sqrt(1.0 - std::norm(a())); }
cplx SqueezeParams::c() const { return -std::conj(a()) * w * w * 0.5 - 0.5 * std::norm(w); }

StateResult bifrac_coherent(double alpha, double beta, const BifracAngles& angles, int N) {
    OperatorResult op = bifrac_operator(alpha, beta, angles, N);
    Vec psi = op.op.col(0);
    return {psi, state_report(psi), op.path};
}

Vec coherent_amplitudes(double alpha, double beta, const BifracAngles& angles, int N) {
    if (N < 2) throw DimTooSmall("coherent_amplitudes: need N >= 2");
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    const cplx ea = std::exp(cplx(0.0, ta));
    const cplx eb = std::exp(cplx(0.0, tb));
    const cplx Ag = cplx(0.0, 0.5) * (std::sin(ta) * ea - std::sin(tb) * eb);
    const cplx Bg = beta * eb - cplx(0.0, 1.0) * alpha * ea;
    const cplx scale = product_vs_integral_phase(angles) *
                       std::sqrt(std::abs(std::cos(angles.delta()))) *
                       std::exp(-0.5 * (alpha * alpha + beta * beta));
    Vec t(N);
    t(0) = 1.0;
    t(1) = Bg;
    for (int n = 1; n + 1 < N; ++n)
        t(n + 1) = (Bg * t(n) + 2.0 * Ag * std::sqrt(static_cast<double>(n)) * t(n - 1)) /
                   std::sqrt(static_cast<double>(n + 1));
    return scale * t;
}

BargmannParams bargmann_params(double alpha, double beta, double theta_alpha) {
    const AngleClass c = classify_angle(theta_alpha);
    if (c == AngleClass::Zero || c == AngleClass::Pi)
        throw SpecialAngleNeedsLimit(
            "bargmann_params: cot(theta_alpha) pole at theta_alpha in {0, pi}");
    const double ta = reduce_angle(theta_alpha);
    const double cot = std::cos(ta) / std::sin(ta);
    const cplx denom(1.0, cot);
    BargmannParams out;
    out.A = -1.0 / (2.0 * denom);
    out.B = beta + alpha / (std::sin(ta) * denom);
    out.Gamma = -0.5 * (alpha * alpha + beta * beta);
    out.prefactor = std::sqrt(std::abs(std::cos(ta)));
    return out;
}

cplx bargmann_eval(cplx z, const BargmannParams& params) {
    return params.prefactor * std::exp(params.A * z * z + params.B * z + params.Gamma);
}

cplx squeeze_bargmann(const SqueezeParams& params, cplx z) {
    const cplx a = params.a();
    return std::pow(1.0 - std::norm(a), 0.25) *
           std::exp(0.5 * a * z * z + params.b() * z + params.c());
}

SqueezeParams squeeze_from_bargmann(const BargmannParams& params) {
    const cplx a = 2.0 * params.A;
    const double mag = std::abs(a);
    if (mag >= 1.0 - 1e-12)
        throw DegenerateGaussian(
            "squeeze_from_bargmann: |2A| >= 1, no normalizable squeezed state");
    SqueezeParams out;
    out.r = 2.0 * std::atanh(mag);
    out.phi_sq = -std::arg(-a);
    out.w = params.B / std::sqrt(1.0 - mag * mag);
    return out;
}

namespace {

// f(x) = C exp(u x^2 + v x), the wavefunction's Gaussian data.
struct WaveData {
    cplx C;
    cplx u;
    cplx v;
};

WaveData wave_data(const BargmannParams& p) {
    const cplx denom = 2.0 + 4.0 * p.A;
    if (std::abs(1.0 + 2.0 * p.A) <= 1e-9)
        throw DegenerateGaussian("wavefunction: 1 + 2A vanishes, no Gaussian closed form");
    const cplx kappa = 2.0 * p.A - 1.0;
    const cplx lambda = 2.0 * p.Gamma + 4.0 * p.A * p.Gamma - p.B * p.B;
    WaveData w;
    w.u = kappa / denom;
    w.v = 2.0 * kSqrt2 * p.B / denom;
    w.C = p.prefactor * std::pow(kPi, -0.25) * std::sqrt(1.0 / (1.0 + 2.0 * p.A)) *
          std::exp(lambda / denom);
    return w;
}

// Raw trapezoid moments M_k = integral x^k |f(x)|^2 dx for k = 0..2, with a
// doubling certificate relative to M_0.
struct RawMoments {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
};

RawMoments raw_moments(const WaveData& w, const QuadratureSettings& q) {
    const double ru = w.u.real();
    if (ru >= -1e-12)
        throw DegenerateGaussian("moments: |f|^2 does not decay (Re u >= 0)");
    const double center = -w.v.real() / (2.0 * ru);
    const double sigma = std::sqrt(-1.0 / (4.0 * ru));
    const double half = q.half_width > 0.0 ? q.half_width : 12.0 * sigma;
    const double tol = q.tol > 0.0 ? q.tol : 1e-10;

    auto level = [&](int M) {
        const double h = 2.0 * half / (M - 1);
        RawMoments r;
        for (int i = 0; i < M; ++i) {
            const double x = center + blend_coord(-half, half, M, i);
            const double wgt = (i == 0 || i == M - 1) ? 0.5 : 1.0;
            const double f2 = std::norm(w.C * std::exp(w.u * x * x + w.v * x));
            r.m0 += wgt * f2;
            r.m1 += wgt * f2 * x;
            r.m2 += wgt * f2 * x * x;
        }
        r.m0 *= h;
        r.m1 *= h;
        r.m2 *= h;
        return r;
    };

    int M = q.base_points > 0 ? q.base_points : 201;
    RawMoments prev = level(M);
    for (int d = 0; d < q.max_doublings; ++d) {
        M = 2 * M - 1;
        RawMoments cur = level(M);
        const double scale = std::max(1e-300, std::abs(cur.m0));
        const double diff = std::max({std::abs(cur.m0 - prev.m0), std::abs(cur.m1 - prev.m1),
                                      std::abs(cur.m2 - prev.m2)});
        if (diff <= tol * scale) return cur;
        prev = cur;
    }
    throw QuadratureDivergence("moments: trapezoid moments did not settle under doubling");
}

}  // namespace

cplx wavefunction(double x, const BargmannParams& params) {
    const WaveData w = wave_data(params);
    return w.C * std::exp(w.u * x * x + w.v * x);
}

cplx wavefunction_integral(double x, const BargmannParams& params,
                           const QuadratureSettings& quadrature) {
    // Exponent of the p-integrand, quadratic in p:
    //   E(p) = 2A(x+ip)^2 + sqrt(2) B (x+ip) + Gamma - p^2.
    const cplx u2 = -(1.0 + 2.0 * params.A);
    const cplx u1 = cplx(0.0, 1.0) * (4.0 * params.A * x + kSqrt2 * params.B);
    const cplx u0 = 2.0 * params.A * x * x + kSqrt2 * params.B * x + params.Gamma;
    if (u2.real() >= -1e-12)
        throw DegenerateGaussian("wavefunction_integral: p-integrand does not decay");
    const double center = -u1.real() / (2.0 * u2.real());
    const double sigma = std::sqrt(-1.0 / (2.0 * u2.real()));
    const double half = quadrature.half_width > 0.0 ? quadrature.half_width : 12.0 * sigma;
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-9;
    const cplx outer = params.prefactor * std::pow(kPi, -0.75) * std::exp(-0.5 * x * x);

    auto level = [&](int M) {
        const double h = 2.0 * half / (M - 1);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < M; ++i) {
            const double p = center + blend_coord(-half, half, M, i);
            const double wgt = (i == 0 || i == M - 1) ? 0.5 : 1.0;
            acc += wgt * std::exp(u2 * p * p + u1 * p + u0);
        }
        return cplx(outer * h * acc);
    };

    int M = quadrature.base_points > 0 ? quadrature.base_points : 201;
    cplx prev = level(M);
    for (int d = 0; d < quadrature.max_doublings; ++d) {
        M = 2 * M - 1;
        const cplx cur = level(M);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureDivergence("wavefunction_integral: quadrature did not settle under doubling");
}

double wavefunction_norm(const BargmannParams& params, const QuadratureSettings& quadrature) {
    return std::sqrt(raw_moments(wave_data(params), quadrature).m0);
}

Moments moments_from_wavefunction(const BargmannParams& params,
                                  const QuadratureSettings& quadrature) {
    const WaveData w = wave_data(params);
    const RawMoments raw = raw_moments(w, quadrature);
    const double m1 = raw.m1 / raw.m0;
    const double m2 = raw.m2 / raw.m0;

    // f' = (2u x + v) f turns every p-moment into x-moments of |f|^2.
    const cplx u = w.u;
    const cplx v = w.v;
    const cplx mean_p_c = cplx(0.0, -1.0) * (2.0 * u * m1 + v);
    const cplx mean_p2_c = -(4.0 * u * u * m2 + 4.0 * u * v * m1 + (v * v + 2.0 * u));
    const cplx sym_c = cplx(0.0, -0.5) + cplx(0.0, -1.0) * (2.0 * u * m2 + v * m1);

    Moments out;
    out.mean_x = m1;
    out.mean_p = mean_p_c.real();
    out.sxx = m2 - m1 * m1;
    out.spp = mean_p2_c.real() - out.mean_p * out.mean_p;
    out.sxp = sym_c.real() - out.mean_x * out.mean_p;
    return out;
}

PhotonStats photon_stats(const BargmannParams& params, int n_max) {
    if (n_max < 10) throw DimTooSmall("photon_stats: need n_max >= 10");
    const cplx scale = params.prefactor * std::exp(params.Gamma);
    PhotonStats out;
    out.a_n.resize(static_cast<std::size_t>(n_max) + 1);
    // t_n = c_n sqrt(n!) for the Taylor coefficients c_n of exp(A z^2 + B z).
    cplx t_prev(1.0, 0.0);
    cplx t_cur = params.B;
    out.a_n[0] = scale * t_prev;
    if (n_max >= 1) out.a_n[1] = scale * t_cur;
    for (int n = 1; n < n_max; ++n) {
        const cplx t_next =
            (params.B * t_cur + 2.0 * params.A * std::sqrt(static_cast<double>(n)) * t_prev) /
            std::sqrt(static_cast<double>(n + 1));
        out.a_n[static_cast<std::size_t>(n) + 1] = scale * t_next;
        t_prev = t_cur;
        t_cur = t_next;
    }
    for (int n = 0; n <= n_max; ++n) {
        const double p = std::norm(out.a_n[static_cast<std::size_t>(n)]);
        out.norm_captured += p;
        out.mean_n += n * p;
        out.mean_n2 += static_cast<double>(n) * n * p;
    }
    out.g2 = out.mean_n == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                               : (out.mean_n2 - out.mean_n) / (out.mean_n * out.mean_n);
    out.norm_warning = out.norm_captured < 0.99;
    return out;
}

cplx analysis_coefficients(const Vec& g, double alpha, double beta, const BifracAngles& angles,
                           int N) {
    if (static_cast<int>(g.size()) != N)
        throw DimTooSmall("analysis_coefficients: state dimension must match N");
    const Vec psi = coherent_amplitudes(alpha, beta, angles, N);
    return psi.dot(g) / (2.0 * kPi);  // Eigen dot conjugates the left argument
}

StateGrid coherent_grid(const BifracAngles& angles, double lo, double hi, int count, int N) {
    if (count < 2) throw DimTooSmall("coherent_grid: need at least 2 points per axis");
    StateGrid grid;
    grid.a_lo = lo;
    grid.a_hi = hi;
    grid.a_count = count;
    grid.b_lo = lo;
    grid.b_hi = hi;
    grid.b_count = count;
    grid.fock_dim = N;
    grid.states.resize(static_cast<std::size_t>(count) * count);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
        const double a = grid.acoord(static_cast<int>(i));
        for (int j = 0; j < count; ++j)
            grid.states[i * static_cast<std::size_t>(count) + static_cast<std::size_t>(j)] =
                coherent_amplitudes(a, grid.bcoord(j), angles, N);
    });
    return grid;
}

namespace {

// Per-axis quadrature stencil against the shift kernel: a delta collapse for
// phi in {0, pi}, the weighted kernel row otherwise.
struct AxisStencil {
    std::vector<int> idx;
    std::vector<cplx> wgt;
};

AxisStencil axis_stencil(double target, double phi, double lo, double hi, int count) {
    AxisStencil s;
    const AngleClass c = classify_angle(phi);
    if (c == AngleClass::Zero || c == AngleClass::Pi) {
        const double want = (c == AngleClass::Zero) ? target : -target;
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < count; ++j) {
            const double d = std::abs(blend_coord(lo, hi, count, j) - want);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        s.idx.push_back(best);
        s.wgt.push_back(cplx(1.0, 0.0));
        return s;
    }
    const double h = (hi - lo) / static_cast<double>(count - 1);
    s.idx.reserve(static_cast<std::size_t>(count));
    s.wgt.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double trap = (j == 0 || j == count - 1) ? 0.5 : 1.0;
        s.idx.push_back(j);
        s.wgt.push_back(h * trap * kernel_value(target, blend_coord(lo, hi, count, j), phi));
    }
    return s;
}

}  // namespace

Vec family_transform(const StateGrid& base, double phi_alpha, double phi_beta,
                     const BifracAngles& base_angles, double alpha, double beta) {
    const BifracAngles target(base_angles.theta_alpha + phi_alpha,
                              base_angles.theta_beta + phi_beta);
    const double ratio = std::sqrt(std::abs(std::cos(target.delta()))) /
                         std::sqrt(std::abs(std::cos(base_angles.delta())));

    const AxisStencil sa = axis_stencil(alpha, phi_alpha, base.a_lo, base.a_hi, base.a_count);
    const AxisStencil sb = axis_stencil(beta, phi_beta, base.b_lo, base.b_hi, base.b_count);

    Vec acc = Vec::Zero(base.fock_dim);
    for (std::size_t i = 0; i < sa.idx.size(); ++i) {
        Vec row = Vec::Zero(base.fock_dim);
        for (std::size_t j = 0; j < sb.idx.size(); ++j)
            row += sb.wgt[j] * base.at(sa.idx[i], sb.idx[j]);
        acc += sa.wgt[i] * row;
    }
    return ratio * acc;
}

std::vector<SweepRow> sweep_stats(double alpha, double beta, double lo, double hi, double step,
                                  int n_max) {
    if (step <= 0.0) throw Error("sweep_stats: step must be positive");
    std::vector<double> thetas;
    for (int k = 0;; ++k) {
        const double t = lo + k * step;
        if (t > hi + 0.5 * step) break;
        thetas.push_back(t);
    }
    std::vector<SweepRow> rows(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t i) {
        const double ta = thetas[i];
        const BargmannParams params = bargmann_params(alpha, beta, ta);
        const PhotonStats stats = photon_stats(params, n_max);
        const Moments mom = moments_from_wavefunction(params, {});
        SweepRow& r = rows[i];
        r.theta_alpha = ta;
        r.sigma_pp = mom.spp;
        r.mean_n = stats.mean_n;
        r.g2 = stats.g2;
        r.norm_captured = stats.norm_captured;
        r.rs_defect = mom.sxx * mom.spp - mom.sxp * mom.sxp - 0.25;
    });
    return rows;
}

}  // namespace bifrac
