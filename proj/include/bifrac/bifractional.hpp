#pragma once

#include <Eigen/Dense>

#include "bifrac/fock.hpp"
#include "bifrac/fracft.hpp"

namespace bifrac {

// Angle pair for the bifractional displacement operator U(alpha,beta;ta,tb).
// Angles are reduced to (-pi, pi] (the operator is 2*pi-periodic in each).
// Construction rejects the band |cos(ta - tb)| < eps_c where the defining
// integral's prefactor vanishes.
struct BifracAngles {
    double theta_alpha = 0.0;
    double theta_beta = 0.0;

    BifracAngles(double ta, double tb, double eps_c = 1e-3);
    double delta() const { return theta_alpha - theta_beta; }
};

// Parameters of the closed product form
//   U = e^{i*phi} exp[i*tau*(p - tan(ta)*x + sigma)^2] exp[i*tan(ta)*x^2 - i*sqrt(2)*alpha*x/cos(ta)].
struct BtoParams {
    double tau = 0.0;
    double sigma = 0.0;
    double phi = 0.0;
};

enum class SpecialPair { ZERO_ZERO, HALF_HALF, PI_PI };

enum class OperatorPath { Special, SplitProduct, AxisLimit, StableFactorization };

const char* operator_path_name(OperatorPath p);

struct OperatorResult {
    Mat op;
    TruncationReport report;
    OperatorPath path = OperatorPath::SplitProduct;
};

// Heisenberg-picture fingerprint: U^dag (x,p)^T U = S (x,p)^T + d, plus the
// vacuum phase <0|U|0>/|<0|U|0>| and the max-elementwise fit residual.
struct GaussianUnitary {
    Eigen::Matrix2d S = Eigen::Matrix2d::Identity();
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    cplx phase{1.0, 0.0};
    double residual = 0.0;
};

// tau = cos(ta)*sin(tb)/cos(ta-tb)
// sigma = alpha/(sqrt(2)*cos(ta)) - beta/(sqrt(2)*sin(tb))
// phi = -(ta+tb)/2 - (alpha^2*cot(ta) + beta^2*cot(tb))/2 + alpha^2/sin(2*ta)
// Throws SpecialAngleNeedsLimit naming the offending term when an angle sits
// on a pole of these expressions (ta at +-pi/2; ta in {0,pi} unless alpha == 0;
// tb in {0,pi} unless beta == 0).
BtoParams bto_params(double alpha, double beta, const BifracAngles& angles);

// The operator itself, on an N-dimensional truncated basis. Dispatch:
//   - exact special pairs (0,0), (pi/2,pi/2), (pi,pi) within 1e-9;
//   - tb in {0,pi}: closed limit route (AxisLimit) when the product form fits
//     the truncation budget, else the stable factorization;
//   - ta within 1e-6 of +-pi/2 with tb away from ta: rejected
//     (SpecialAngleNeedsLimit), the product form is singular there;
//   - otherwise the literal split product when split_fock_requirement <= N,
//     else a phase-anchored displacement*rotation*squeeze*rotation
//     factorization of the same operator (StableFactorization).
// All paths agree on trusted matrix elements including the global phase.
OperatorResult bifrac_operator(double alpha, double beta, const BifracAngles& angles, int N);

// (0,0) -> D(beta,-alpha); (pi/2,pi/2) -> displaced parity; (pi,pi) -> D(-beta,alpha).
Mat special_case_operator(double alpha, double beta, SpecialPair which, int N);

// Defining double integral
//   sqrt(|cos(ta-tb)|) integral dadb K(beta,a;tb) K(alpha,-b;ta) D(a,b)
// by tensor-product trapezoid quadrature with doubling certificate on the
// low block m,n <= min(N-1, 16). Slow oracle for bifrac_operator.
Mat bifrac_operator_integral(double alpha, double beta, const BifracAngles& angles, int N,
                             const QuadratureSettings& quadrature = {});

// Least-squares fit of U^dag x U and U^dag p U as c1*x + c2*p + c3 over the
// top-left fit_block (default max(4, N/4)). Throws NotGaussian when the fit
// residual reaches 1e-6.
GaussianUnitary gaussian_fingerprint(const Mat& U, int fit_block = 0);

// Closed form of the fingerprint (S, d) for U(alpha,beta;ta,tb); pole-free
// for admissible angles. Used by the stable construction path and as the
// oracle for gaussian_fingerprint.
void heisenberg_action(double alpha, double beta, const BifracAngles& angles,
                       Eigen::Matrix2d& S, Eigen::Vector2d& d);

// Constant global phase by which the split product form differs from the
// defining integral: sign(cos(ta)) * i^round((ta-tb)/pi) on reduced angles.
// Measured property of the printed phase phi, kept as a documented table.
cplx product_vs_integral_phase(const BifracAngles& angles);

// Minimum truncation dimension at which the literal split product keeps its
// low matrix elements (m,n <= 8) accurate; grows with the chirp strength
// tan(ta) and the effective quadratic coefficient tau*(1+tan(ta)^2).
double split_fock_requirement(const BifracAngles& angles);

}  // namespace bifrac
