#include "bifrac/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "bifrac/errors.hpp"

namespace bifrac {

TruncationReport state_report(const Vec& v, double eps_edge) {
    const int N = static_cast<int>(v.size());
    if (N < 2) throw DimTooSmall("state_report: need at least 2 Fock levels");
    const int k = (N + 9) / 10;
    double edge = 0.0;
    for (int n = N - k; n < N; ++n) edge += std::norm(v(n));
    return TruncationReport{edge, edge < eps_edge};
}

TruncationReport operator_report(const Mat& m, double eps_edge) {
    const int N = static_cast<int>(m.rows());
    if (N < 2 || m.cols() != N) throw DimTooSmall("operator_report: need a square matrix, N >= 2");
    const int k = (N + 9) / 10;
    const int cmax = std::min(N - 1, N / 4);
    double edge = 0.0;
    for (int c = 0; c <= cmax; ++c) {
        double col = 0.0;
        for (int r = N - k; r < N; ++r) col += std::norm(m(r, c));
        edge = std::max(edge, col);
    }
    return TruncationReport{edge, edge < eps_edge};
}

std::pair<Mat, Mat> ladder_ops(int N) {
    if (N < 2) throw DimTooSmall("ladder_ops: need N >= 2");
    Mat a = Mat::Zero(N, N);
    for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a, a.adjoint()};
}

std::pair<Mat, Mat> quadrature_ops(int N) {
    auto [a, adag] = ladder_ops(N);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Mat x = inv_sqrt2 * (a + adag);
    Mat p = cplx(0.0, inv_sqrt2) * (adag - a);
    return {x, p};
}

Mat matrix_exp(const Mat& A) {
    const int N = static_cast<int>(A.rows());
    if (N < 1 || A.cols() != N) throw DimTooSmall("matrix_exp: need a square matrix");
    const double scale = A.cwiseAbs().maxCoeff();
    const double herm_defect = (A + A.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect <= 1e-12 * (1.0 + scale)) {
        // A = iH with H Hermitian; diagonalize for an exactly unitary result.
        const Mat H = cplx(0.0, -1.0) * A;
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        const Eigen::VectorXd lam = es.eigenvalues();
        Vec phases(N);
        for (int i = 0; i < N; ++i) phases(i) = std::exp(cplx(0.0, lam(i)));
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    if (A.cwiseAbs().rowwise().sum().maxCoeff() > 300.0)
        throw Overflow("matrix_exp: non-skew argument with infinity norm above 300");
    return A.exp();
}

Mat displacement(double alpha, double beta, int N) {
    auto [x, p] = quadrature_ops(N);
    const double s2 = std::sqrt(2.0);
    const Mat G = cplx(0.0, s2 * beta) * x - cplx(0.0, s2 * alpha) * p;
    return matrix_exp(G);
}

Mat displacement_reference(double alpha, double beta, int N) {
    if (N < 2) throw DimTooSmall("displacement_reference: need N >= 2");
    const cplx lam(alpha, beta);
    const cplx lam_conj = std::conj(lam);
    Mat D(N, N);
    D(0, 0) = std::exp(-0.5 * std::norm(lam));
    for (int m = 1; m < N; ++m) D(m, 0) = lam / std::sqrt(static_cast<double>(m)) * D(m - 1, 0);
    for (int n = 0; n + 1 < N; ++n) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(n + 1));
        for (int m = 0; m < N; ++m) {
            const cplx up = (m > 0) ? std::sqrt(static_cast<double>(m)) * D(m - 1, n) : cplx(0.0);
            D(m, n + 1) = (up - lam_conj * D(m, n)) * inv;
        }
    }
    return D;
}

Mat parity(int N) {
    if (N < 2) throw DimTooSmall("parity: need N >= 2");
    Mat P = Mat::Zero(N, N);
    for (int n = 0; n < N; ++n) P(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return P;
}

Mat parity(double alpha, double beta, int N) {
    return displacement_reference(alpha, beta, N) * parity(N);
}

}  // namespace bifrac
