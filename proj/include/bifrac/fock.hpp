#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "bifrac/errors.hpp"
#include "bifrac/fracft.hpp"

namespace bifrac {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Truncation-artifact accounting. edge_weight is the squared-amplitude mass
// found in the top ceil(N/10) basis rows: for a state, of the vector itself;
// for an operator, the worst column among the trusted columns c <= N/4.
struct TruncationReport {
    double edge_weight = 0.0;
    bool trusted = true;
};

TruncationReport state_report(const Vec& psi, double eps_edge = 1e-6);
TruncationReport operator_report(const Mat& U, double eps_edge = 1e-6);

// Annihilation/creation pair on an N-dimensional number basis.
std::pair<Mat, Mat> ladder_ops(int N);

// x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i*sqrt(2)); Hermitian by construction.
std::pair<Mat, Mat> quadrature_ops(int N);

// Matrix exponential. Anti-Hermitian input takes an eigendecomposition route
// (result exactly unitary up to solver roundoff, any generator norm); other
// input uses Pade scaling/squaring and is rejected above an entrywise
// inf-norm of 300 to keep the documented 1e-12 accuracy contract meaningful.
Mat matrix_exp(const Mat& A);

// D(alpha, beta) = exp(i*sqrt(2)*beta*x - i*sqrt(2)*alpha*p), built through
// matrix_exp. Trust region alpha^2 + beta^2 <~ N/4.
Mat displacement(double alpha, double beta, int N);

// Same matrix elements from the exact ladder recurrence
//   D(0,0) entry: e^{-|l|^2/2},  D_{m,0} = l*D_{m-1,0}/sqrt(m),
//   D_{m,n+1} = (sqrt(m)*D_{m-1,n} - conj(l)*D_{m,n})/sqrt(n+1),  l = alpha + i*beta.
// Truncation-free per element; used as the quadrature/test oracle.
Mat displacement_reference(double alpha, double beta, int N);

// Parity diag((-1)^n) and the displaced parity D(alpha,beta)*parity.
Mat parity(int N);
Mat parity(double alpha, double beta, int N);

}  // namespace bifrac
