#pragma once

#include <vector>

#include "bifrac/bifractional.hpp"

namespace bifrac {

// Gaussian Bargmann function  B(z) = prefactor * exp(A z^2 + B z + Gamma)
// of the coherent state at theta_beta = 0:
//   A = -1 / (2 (1 + i cot(ta))),  B = beta + alpha / (sin(ta) (1 + i cot(ta))),
//   Gamma = -(alpha^2 + beta^2)/2, prefactor = |cos(ta)|^{1/2}.
struct BargmannParams {
    cplx A{0.0, 0.0};
    cplx B{0.0, 0.0};
    cplx Gamma{0.0, 0.0};
    double prefactor = 1.0;
};

// Squeezed-state Bargmann data: B(z) = (1-|a|^2)^{1/4} exp(a z^2/2 + b z + c)
// with a = -tanh(r/2) e^{-i phi_sq}, b = w sqrt(1-|a|^2),
// c = -conj(a) w^2/2 - |w|^2/2.
struct SqueezeParams {
    cplx w{0.0, 0.0};
    double r = 0.0;
    double phi_sq = 0.0;

    cplx a() const;
    cplx b() const;
    cplx c() const;
};

struct PhotonStats {
    std::vector<cplx> a_n;
    double mean_n = 0.0;
    double mean_n2 = 0.0;
    double g2 = 0.0;
    double norm_captured = 0.0;
    bool norm_warning = false;  // set when norm_captured < 0.99
};

struct Moments {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sxx = 0.0;
    double spp = 0.0;
    double sxp = 0.0;
};

struct StateResult {
    Vec state;
    TruncationReport report;
    OperatorPath path = OperatorPath::SplitProduct;
};

// U(alpha,beta;angles,N) applied to the vacuum: column 0 of the operator.
StateResult bifrac_coherent(double alpha, double beta, const BifracAngles& angles, int N);

// The same amplitudes from the closed Gaussian generating function
//   <n|U|0> = law * sqrt(|cos(ta-tb)|) * e^{-(alpha^2+beta^2)/2} * t_n,
//   t_{n+1} = (Bg t_n + 2 Ag sqrt(n) t_{n-1}) / sqrt(n+1),
//   Ag = (i/2)(sin(ta) e^{i ta} - sin(tb) e^{i tb}),  Bg = beta e^{i tb} - i alpha e^{i ta},
// where law = product_vs_integral_phase(angles). Truncation-free per element;
// matches bifrac_coherent on trusted elements, phase included.
Vec coherent_amplitudes(double alpha, double beta, const BifracAngles& angles, int N);

BargmannParams bargmann_params(double alpha, double beta, double theta_alpha);
cplx bargmann_eval(cplx z, const BargmannParams& params);

cplx squeeze_bargmann(const SqueezeParams& params, cplx z);

// Inverts a = 2A, b = B, c = Gamma for (w, r, phi_sq). Throws
// DegenerateGaussian when |2A| >= 1 (no normalizable squeezed state).
SqueezeParams squeeze_from_bargmann(const BargmannParams& params);

// Position wavefunction from the Bargmann data:
//   f(x) = prefactor * pi^{-1/4} * (1/(1+2A))^{1/2}
//          * exp[(kappa x^2 + 2^{3/2} B x + lambda) / (2 + 4A)],
//   kappa = 2A - 1, lambda = 2 Gamma + 4 A Gamma - B^2,
// principal square-root branch. Throws DegenerateGaussian when |1+2A| <= 1e-9.
cplx wavefunction(double x, const BargmannParams& params);

// Same value from the integral form
//   pi^{-3/4} e^{-x^2/2} integral dp B((x+ip) sqrt(2)) e^{-p^2},
// by trapezoid quadrature with a doubling certificate.
cplx wavefunction_integral(double x, const BargmannParams& params,
                           const QuadratureSettings& quadrature = {});

double wavefunction_norm(const BargmannParams& params, const QuadratureSettings& quadrature = {});

// x-moments by quadrature of |f|^2; p-moments with the derivative taken
// analytically from the Gaussian closed form (never finite differences).
Moments moments_from_wavefunction(const BargmannParams& params,
                                  const QuadratureSettings& quadrature = {});

// a_n = (Taylor coefficient of z^n in B(z)) * sqrt(n!) via the stable
// two-term recurrence; raw truncated sums for <n>, <n^2>; g2 = NaN at <n> = 0.
PhotonStats photon_stats(const BargmannParams& params, int n_max);

// (1/2pi) <alpha,beta;angles | g>.
cplx analysis_coefficients(const Vec& g, double alpha, double beta, const BifracAngles& angles,
                           int N);

// A state family sampled over an (a', b') lattice; row-major a-index major.
struct StateGrid {
    double a_lo = 0.0, a_hi = 0.0;
    int a_count = 0;
    double b_lo = 0.0, b_hi = 0.0;
    int b_count = 0;
    int fock_dim = 0;
    std::vector<Vec> states;

    double acoord(int i) const { return blend_coord(a_lo, a_hi, a_count, i); }
    double bcoord(int j) const { return blend_coord(b_lo, b_hi, b_count, j); }
    const Vec& at(int i, int j) const { return states[static_cast<std::size_t>(i) * b_count + j]; }
};

// Coherent family over a lattice at fixed angles, from coherent_amplitudes.
StateGrid coherent_grid(const BifracAngles& angles, double lo, double hi, int count, int N);

// Angle-shift relation: produces the state at (alpha, beta) and angles
// (ta + phi_alpha, tb + phi_beta) from the sampled family at (ta, tb) by the
// two-variable kernel quadrature
//   ratio * integral da'db' K(beta,b';phi_beta) K(alpha,a';phi_alpha) g(a',b'),
//   ratio = sqrt(|cos(ta+phi_alpha-tb-phi_beta)|) / sqrt(|cos(ta-tb)|).
// Both angle pairs must be admissible.
Vec family_transform(const StateGrid& base, double phi_alpha, double phi_beta,
                     const BifracAngles& base_angles, double alpha, double beta);

// Fixed-format sweep row for the statistics CSV (theta_beta = 0 route).
struct SweepRow {
    double theta_alpha = 0.0;
    double sigma_pp = 0.0;
    double mean_n = 0.0;
    double g2 = 0.0;
    double norm_captured = 0.0;
    double rs_defect = 0.0;  // sxx*spp - sxp^2 - 1/4, diagnostic only
};

std::vector<SweepRow> sweep_stats(double alpha, double beta, double lo, double hi, double step,
                                  int n_max = 30);

}  // namespace bifrac
