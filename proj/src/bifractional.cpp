#include "bifrac/bifractional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "bifrac/parallel.hpp"

namespace bifrac {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

BifracAngles::BifracAngles(double ta, double tb, double eps_c)
    : theta_alpha(reduce_angle(ta)), theta_beta(reduce_angle(tb)) {
    const double c = std::cos(theta_alpha - theta_beta);
    if (std::abs(c) < eps_c) {
        std::ostringstream os;
        os << "|cos(theta_alpha - theta_beta)| = " << std::abs(c) << " is inside the excluded band "
           << eps_c << " around theta_alpha - theta_beta = +-pi/2";
        throw ForbiddenBand(os.str());
    }
}

const char* operator_path_name(OperatorPath p) {
    switch (p) {
        case OperatorPath::Special: return "special";
        case OperatorPath::SplitProduct: return "split-product";
        case OperatorPath::AxisLimit: return "axis-limit";
        case OperatorPath::StableFactorization: return "stable-factorization";
    }
    return "unknown";
}

BtoParams bto_params(double alpha, double beta, const BifracAngles& angles) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    const AngleClass ca = classify_angle(ta);
    const AngleClass cb = classify_angle(tb);

    if (ca == AngleClass::HalfPi || ca == AngleClass::MinusHalfPi)
        throw SpecialAngleNeedsLimit(
            "bto_params: 1/cos(theta_alpha) and 1/sin(2 theta_alpha) pole at theta_alpha = +-pi/2");
    if ((ca == AngleClass::Zero || ca == AngleClass::Pi) && alpha != 0.0)
        throw SpecialAngleNeedsLimit(
            "bto_params: alpha^2 cot(theta_alpha) and alpha^2/sin(2 theta_alpha) pole at "
            "theta_alpha in {0, pi} with alpha != 0");
    if ((cb == AngleClass::Zero || cb == AngleClass::Pi) && beta != 0.0)
        throw SpecialAngleNeedsLimit(
            "bto_params: beta/sin(theta_beta) pole at theta_beta in {0, pi} with beta != 0");

    BtoParams out;
    out.tau = std::cos(ta) * std::sin(tb) / std::cos(ta - tb);

    const double alpha_term = (alpha == 0.0) ? 0.0 : alpha / (kSqrt2 * std::cos(ta));
    const double beta_term = (beta == 0.0) ? 0.0 : beta / (kSqrt2 * std::sin(tb));
    out.sigma = alpha_term - beta_term;

    const double phi_a =
        (alpha == 0.0) ? 0.0
                       : -0.5 * alpha * alpha * (std::cos(ta) / std::sin(ta)) +
                             alpha * alpha / std::sin(2.0 * ta);
    const double phi_b = (beta == 0.0) ? 0.0 : -0.5 * beta * beta * (std::cos(tb) / std::sin(tb));
    out.phi = -0.5 * (ta + tb) + phi_a + phi_b;
    return out;
}

Mat special_case_operator(double alpha, double beta, SpecialPair which, int N) {
    switch (which) {
        case SpecialPair::ZERO_ZERO: return displacement_reference(beta, -alpha, N);
        case SpecialPair::HALF_HALF: return parity(alpha, beta, N);
        case SpecialPair::PI_PI: return displacement_reference(-beta, alpha, N);
    }
    throw Error("special_case_operator: unreachable");
}

double split_fock_requirement(const BifracAngles& angles) {
    const double t = std::tan(angles.theta_alpha);
    const double tau =
        std::cos(angles.theta_alpha) * std::sin(angles.theta_beta) / std::cos(angles.delta());
    const double mu = std::abs(tau) * (1.0 + t * t);
    const double s1 = mu + std::sqrt(1.0 + mu * mu);
    const double s2 = std::abs(t) + std::sqrt(1.0 + t * t);
    const double s = s1 * s2;
    return 8.5 * 0.5 * (s * s + 1.0 / (s * s));
}

cplx product_vs_integral_phase(const BifracAngles& angles) {
    const double sign = std::cos(angles.theta_alpha) >= 0.0 ? 1.0 : -1.0;
    const long k = std::lround(angles.delta() / kPi);
    static const cplx i_pow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    return sign * i_pow[((k % 4) + 4) % 4];
}

void heisenberg_action(double alpha, double beta, const BifracAngles& angles, Eigen::Matrix2d& S,
                       Eigen::Vector2d& d) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    const double cd = std::cos(angles.delta());
    const double diag = std::cos(ta + tb) / cd;
    S(0, 0) = diag;
    S(0, 1) = -2.0 * std::cos(ta) * std::sin(tb) / cd;
    S(1, 0) = 2.0 * std::sin(ta) * std::cos(tb) / cd;
    S(1, 1) = diag;
    d(0) = kSqrt2 * (alpha * std::sin(tb) + beta * std::cos(ta)) / cd;
    d(1) = kSqrt2 * (beta * std::sin(ta) - alpha * std::cos(tb)) / cd;
}

namespace {

Mat number_phase(double u, int N) {
    Mat R = Mat::Zero(N, N);
    for (int n = 0; n < N; ++n) R(n, n) = std::exp(cplx(0.0, -u * n));
    return R;
}

Mat split_product(double alpha, double beta, const BifracAngles& angles, int N) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    const double t = std::tan(ta);
    const double c = std::cos(ta);
    const double tau = std::cos(ta) * std::sin(tb) / std::cos(angles.delta());
    const double sigma = alpha / (kSqrt2 * c) - beta / (kSqrt2 * std::sin(tb));
    // Same constant as the bto_params phi with the theta_alpha terms combined
    // into (alpha^2 tan(ta))/2, which stays finite for theta_alpha near {0, pi}.
    const double phi =
        -0.5 * (ta + tb) + 0.5 * (alpha * alpha * t - beta * beta * std::cos(tb) / std::sin(tb));

    auto [x, p] = quadrature_ops(N);
    Mat arg = p - t * x + sigma * Mat::Identity(N, N);
    Mat left = matrix_exp(cplx(0.0, tau) * (arg * arg).eval());
    Mat right = matrix_exp((cplx(0.0, t) * (x * x) - cplx(0.0, kSqrt2 * alpha / c) * x).eval());
    return std::exp(cplx(0.0, phi)) * left * right;
}

Mat axis_limit(double alpha, double beta, const BifracAngles& angles, bool at_pi, int N) {
    const double ta = angles.theta_alpha;
    const double t = std::tan(ta);
    const double c = std::cos(ta);
    auto [x, p] = quadrature_ops(N);
    const double sign = at_pi ? 1.0 : -1.0;
    const double phi = -0.5 * ta + (at_pi ? -0.5 * kPi : 0.0) + 0.5 * t * (alpha * alpha - beta * beta) +
                       sign * alpha * beta / c;
    Mat left = matrix_exp((cplx(0.0, sign * kSqrt2 * beta) * (p - t * x)).eval());
    Mat right = matrix_exp((cplx(0.0, t) * (x * x) - cplx(0.0, kSqrt2 * alpha / c) * x).eval());
    return std::exp(cplx(0.0, phi)) * left * right;
}

Mat stable_factorization(double alpha, double beta, const BifracAngles& angles, int N) {
    Eigen::Matrix2d S;
    Eigen::Vector2d d;
    heisenberg_action(alpha, beta, angles, S, d);

    Eigen::JacobiSVD<Eigen::Matrix2d> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2d A = svd.matrixU();
    Eigen::Matrix2d Bt = svd.matrixV().transpose();
    if (A.determinant() < 0.0) {
        A.col(1) *= -1.0;
        Bt.row(1) *= -1.0;
    }
    const double u = std::atan2(A(0, 1), A(0, 0));
    const double v = std::atan2(Bt(0, 1), Bt(0, 0));
    const double r = std::log(svd.singularValues()(0));

    auto [x, p] = quadrature_ops(N);
    const Mat squeeze = matrix_exp((cplx(0.0, -0.5 * r) * (x * p + p * x)).eval());
    const Mat disp = displacement_reference(d(0) / kSqrt2, d(1) / kSqrt2, N);
    Mat U0 = disp * number_phase(u, N) * squeeze * number_phase(v, N);

    const cplx anchor = product_vs_integral_phase(angles) *
                        std::sqrt(std::abs(std::cos(angles.delta()))) *
                        std::exp(-0.5 * (alpha * alpha + beta * beta));
    if (std::abs(U0(0, 0)) < 1e-300)
        throw Overflow("bifrac_operator: vacuum element of the factorized operator vanished, "
                       "cannot anchor the phase");
    return (anchor / U0(0, 0)) * U0;
}

}  // namespace

OperatorResult bifrac_operator(double alpha, double beta, const BifracAngles& angles, int N) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;

    auto near = [](double x, double target) { return std::abs(x - target) <= kAngleEps; };
    if (near(ta, 0.0) && near(tb, 0.0)) {
        Mat U = special_case_operator(alpha, beta, SpecialPair::ZERO_ZERO, N);
        return {U, operator_report(U), OperatorPath::Special};
    }
    if (near(ta, 0.5 * kPi) && near(tb, 0.5 * kPi)) {
        Mat U = special_case_operator(alpha, beta, SpecialPair::HALF_HALF, N);
        return {U, operator_report(U), OperatorPath::Special};
    }
    if (near(ta, kPi) && near(tb, kPi)) {
        Mat U = special_case_operator(alpha, beta, SpecialPair::PI_PI, N);
        return {U, operator_report(U), OperatorPath::Special};
    }

    const double budget = split_fock_requirement(angles);
    const AngleClass cb = classify_angle(tb);
    if (cb == AngleClass::Zero || cb == AngleClass::Pi) {
        if (budget <= static_cast<double>(N)) {
            Mat U = axis_limit(alpha, beta, angles, cb == AngleClass::Pi, N);
            return {U, operator_report(U), OperatorPath::AxisLimit};
        }
        Mat U = stable_factorization(alpha, beta, angles, N);
        return {U, operator_report(U), OperatorPath::StableFactorization};
    }

    const double dpole = std::min(std::abs(ta - 0.5 * kPi), std::abs(ta + 0.5 * kPi));
    if (dpole <= 1e-6 && std::abs(ta - tb) > 1e-6)
        throw SpecialAngleNeedsLimit(
            "bifrac_operator: theta_alpha within 1e-6 of +-pi/2 with theta_beta away from it; "
            "the product form is singular, take the limit explicitly");

    if (budget <= static_cast<double>(N)) {
        Mat U = split_product(alpha, beta, angles, N);
        return {U, operator_report(U), OperatorPath::SplitProduct};
    }
    Mat U = stable_factorization(alpha, beta, angles, N);
    return {U, operator_report(U), OperatorPath::StableFactorization};
}

Mat bifrac_operator_integral(double alpha, double beta, const BifracAngles& angles, int N,
                             const QuadratureSettings& quadrature) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    if (classify_angle(ta) != AngleClass::Regular || classify_angle(tb) != AngleClass::Regular)
        throw SpecialAngle("bifrac_operator_integral: both angles must be regular");
    if (N < 2) throw DimTooSmall("bifrac_operator_integral: need N >= 2");

    const int n_keep = std::min(N, 16);
    const double L = quadrature.half_width > 0.0
                         ? quadrature.half_width
                         : std::max({6.0, 3.0 + 2.0 * std::max(std::abs(alpha), std::abs(beta)),
                                     3.0 + std::sqrt(4.0 * n_keep + 2.0)});
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-4;
    const int block = std::min(16, N - 1);

    // Worst certified element's integrand magnitude at the cutoff radius.
    const int mn = block;
    const double tail = std::exp(-L * L + 2.0 * mn * std::log(L * kSqrt2) - std::lgamma(mn + 1.0));
    if (tail > 1e-5) {
        std::ostringstream os;
        os << "bifrac_operator_integral: boundary envelope " << tail << " at |point| = " << L
           << " too large for certified elements up to (" << mn << "," << mn << ")";
        throw QuadratureDivergence(os.str());
    }

    const double pref = std::sqrt(std::abs(std::cos(angles.delta())));
    auto level = [&](int M) {
        const double h = 2.0 * L / (M - 1);
        std::vector<Mat> rows(static_cast<std::size_t>(M));
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
            const double ap = blend_coord(-L, L, M, static_cast<int>(i));
            const cplx row_kernel = kernel_value(beta, ap, tb);
            Mat acc = Mat::Zero(N, N);
            for (int j = 0; j < M; ++j) {
                const double bp = blend_coord(-L, L, M, j);
                const double wj = (j == 0 || j == M - 1) ? 0.5 : 1.0;
                acc.noalias() +=
                    (wj * row_kernel * kernel_value(alpha, -bp, ta)) * displacement_reference(ap, bp, N);
            }
            rows[i] = std::move(acc);
        });
        Mat total = Mat::Zero(N, N);
        for (int i = 0; i < M; ++i) {
            const double wi = (i == 0 || i == M - 1) ? 0.5 : 1.0;
            total += wi * rows[static_cast<std::size_t>(i)];
        }
        return Mat((pref * h * h) * total);
    };

    int M = quadrature.base_points > 0 ? quadrature.base_points : 321;
    Mat prev = level(M);
    for (int d = 0; d < quadrature.max_doublings; ++d) {
        M = 2 * M - 1;
        Mat cur = level(M);
        const double diff =
            (cur.topLeftCorner(block + 1, block + 1) - prev.topLeftCorner(block + 1, block + 1))
                .cwiseAbs()
                .maxCoeff();
        if (diff <= tol) return cur;
        prev = std::move(cur);
    }
    std::ostringstream os;
    os << "bifrac_operator_integral: certified block did not settle below " << tol << " by M = " << M
       << " points per axis (half-width " << L << ", boundary envelope " << tail << ")";
    throw QuadratureDivergence(os.str());
}

GaussianUnitary gaussian_fingerprint(const Mat& U, int fit_block) {
    const int N = static_cast<int>(U.rows());
    if (N < 4 || U.cols() != N) throw DimTooSmall("gaussian_fingerprint: need a square matrix, N >= 4");
    const int K = fit_block > 0 ? std::min(fit_block, N) : std::max(4, N / 4);

    auto [x, p] = quadrature_ops(N);
    const Mat Xh = (U.adjoint() * x * U).topLeftCorner(K, K);
    const Mat Ph = (U.adjoint() * p * U).topLeftCorner(K, K);
    const Mat B1 = x.topLeftCorner(K, K);
    const Mat B2 = p.topLeftCorner(K, K);
    const Mat B3 = Mat::Identity(K, K);

    const Mat basis[3] = {B1, B2, B3};
    Eigen::Matrix3cd G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = (basis[i].adjoint() * basis[j]).trace();

    GaussianUnitary out;
    double residual = 0.0;
    Eigen::Vector3cd coeff[2];
    const Mat targets[2] = {Xh, Ph};
    for (int row = 0; row < 2; ++row) {
        Eigen::Vector3cd rhs;
        for (int i = 0; i < 3; ++i) rhs(i) = (basis[i].adjoint() * targets[row]).trace();
        coeff[row] = G.ldlt().solve(rhs);
        const Mat fit = coeff[row](0) * B1 + coeff[row](1) * B2 + coeff[row](2) * B3;
        residual = std::max(residual, (targets[row] - fit).cwiseAbs().maxCoeff());
    }
    if (residual >= 1e-6) {
        std::ostringstream os;
        os << "gaussian_fingerprint: affine fit residual " << residual
           << " on the leading " << K << "x" << K << " block";
        throw NotGaussian(os.str());
    }
    out.S(0, 0) = coeff[0](0).real();
    out.S(0, 1) = coeff[0](1).real();
    out.S(1, 0) = coeff[1](0).real();
    out.S(1, 1) = coeff[1](1).real();
    out.d(0) = coeff[0](2).real();
    out.d(1) = coeff[1](2).real();
    out.residual = residual;
    const cplx u00 = U(0, 0);
    out.phase = std::abs(u00) < 1e-300 ? cplx(1.0, 0.0) : u00 / std::abs(u00);
    return out;
}

}  // namespace bifrac
