#include "bifrac/phasespace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "bifrac/parallel.hpp"

namespace bifrac {

namespace {
constexpr double kPi = std::numbers::pi;

cplx trace_product(const Mat& theta_op, const Mat& other) {
    // Tr(A B) as an entrywise sum, avoiding the full matrix product.
    return (theta_op.transpose().cwiseProduct(other)).sum();
}

bool half_pair(const BifracAngles& a) {
    return std::abs(a.theta_alpha - 0.5 * kPi) <= kAngleEps &&
           std::abs(a.theta_beta - 0.5 * kPi) <= kAngleEps;
}

}  // namespace

const char* grid_kind_name(GridKind k) {
    switch (k) {
        case GridKind::WEYL: return "weyl";
        case GridKind::WIGNER: return "wigner";
        case GridKind::BIFRAC_WIGNER: return "bifrac-wigner";
        case GridKind::Q: return "q";
        case GridKind::BIFRAC_Q: return "bifrac-q";
        case GridKind::BIFRAC_P: return "bifrac-p";
    }
    return "unknown";
}

namespace {

PhaseSpaceGrid displaced_trace_grid(const Mat& theta_op, const Axis& alpha_axis,
                                    const Axis& beta_axis, bool with_parity) {
    const int N = static_cast<int>(theta_op.rows());
    PhaseSpaceGrid g;
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    g.kind = with_parity ? GridKind::WIGNER : GridKind::WEYL;
    g.fock_dim = N;
    g.trusted = operator_report(theta_op).trusted;
    g.values.assign(static_cast<std::size_t>(alpha_axis.count) * beta_axis.count, cplx(0.0));
    parallel_for(static_cast<std::size_t>(alpha_axis.count), [&](std::size_t ia) {
        const double a = alpha_axis.coord(static_cast<int>(ia));
        for (int ib = 0; ib < beta_axis.count; ++ib) {
            Mat D = displacement_reference(a, beta_axis.coord(ib), N);
            if (with_parity)
                for (int n = 1; n < N; n += 2) D.col(n) *= -1.0;
            g.values[ia * static_cast<std::size_t>(beta_axis.count) + ib] =
                trace_product(theta_op, D);
        }
    });
    return g;
}

}  // namespace

PhaseSpaceGrid weyl_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis) {
    return displaced_trace_grid(theta_op, alpha_axis, beta_axis, false);
}

PhaseSpaceGrid wigner_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis) {
    return displaced_trace_grid(theta_op, alpha_axis, beta_axis, true);
}

std::pair<cplx, cplx> fourier_relation_check(const Mat& theta_op, double alpha, double beta,
                                             const QuadratureSettings& quadrature) {
    const int N = static_cast<int>(theta_op.rows());
    Mat Pi = parity(alpha, beta, N);
    const cplx lhs = trace_product(theta_op, Pi);

    const double L = quadrature.half_width > 0.0
                         ? quadrature.half_width
                         : std::max(8.0, 4.0 + 2.0 * std::max(std::abs(alpha), std::abs(beta)));
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-5;

    auto level = [&](int M) {
        const double h = 2.0 * L / (M - 1);
        std::vector<cplx> rows(static_cast<std::size_t>(M), cplx(0.0));
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
            const double ap = blend_coord(-L, L, M, static_cast<int>(i));
            const double wi = (i == 0 || i + 1 == static_cast<std::size_t>(M)) ? 0.5 : 1.0;
            cplx acc(0.0, 0.0);
            for (int j = 0; j < M; ++j) {
                const double bp = blend_coord(-L, L, M, j);
                const double wj = (j == 0 || j == M - 1) ? 0.5 : 1.0;
                const cplx weyl = trace_product(theta_op, displacement_reference(ap, bp, N));
                acc += wj * weyl * std::exp(cplx(0.0, beta * ap - bp * alpha));
            }
            rows[i] = wi * acc;
        });
        cplx total(0.0, 0.0);
        for (const cplx& r : rows) total += r;
        return cplx(total * h * h / (2.0 * kPi));
    };

    int M = quadrature.base_points > 0 ? quadrature.base_points : 161;
    cplx prev = level(M);
    for (int d = 0; d < quadrature.max_doublings; ++d) {
        M = 2 * M - 1;
        const cplx cur = level(M);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return {lhs, cur};
        prev = cur;
    }
    throw QuadratureDivergence("fourier_relation_check: Weyl transform did not settle under doubling");
}

cplx bifrac_wigner(const Mat& theta_op, double alpha, double beta, const BifracAngles& angles,
                   int N) {
    OperatorResult U = bifrac_operator(alpha, beta, angles, N);
    if (static_cast<int>(theta_op.rows()) != N)
        throw DimTooSmall("bifrac_wigner: operator dimension must match N");
    return trace_product(theta_op, U.op);
}

PhaseSpaceGrid bifrac_wigner_grid(const Mat& theta_op, const Axis& alpha_axis,
                                  const Axis& beta_axis, const BifracAngles& angles, int N) {
    if (static_cast<int>(theta_op.rows()) != N)
        throw DimTooSmall("bifrac_wigner_grid: operator dimension must match N");
    PhaseSpaceGrid g;
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    g.kind = GridKind::BIFRAC_WIGNER;
    g.angles = angles;
    g.fock_dim = N;
    g.values.assign(static_cast<std::size_t>(alpha_axis.count) * beta_axis.count, cplx(0.0));
    std::atomic<bool> all_trusted{operator_report(theta_op).trusted};
    parallel_for(static_cast<std::size_t>(alpha_axis.count), [&](std::size_t ia) {
        const double a = alpha_axis.coord(static_cast<int>(ia));
        for (int ib = 0; ib < beta_axis.count; ++ib) {
            OperatorResult U = bifrac_operator(a, beta_axis.coord(ib), angles, N);
            if (!U.report.trusted) all_trusted.store(false, std::memory_order_relaxed);
            g.values[ia * static_cast<std::size_t>(beta_axis.count) + ib] =
                trace_product(theta_op, U.op);
        }
    });
    g.trusted = all_trusted.load();
    return g;
}

cplx oracle_bifrac_wigner(const Mat& theta_op, double alpha, double beta,
                          const BifracAngles& angles, const QuadratureSettings& quadrature) {
    const double ta = angles.theta_alpha;
    const double tb = angles.theta_beta;
    if (classify_angle(ta) != AngleClass::Regular || classify_angle(tb) != AngleClass::Regular)
        throw SpecialAngle("oracle_bifrac_wigner: both angles must be regular");
    const int N = static_cast<int>(theta_op.rows());
    const double L = quadrature.half_width > 0.0
                         ? quadrature.half_width
                         : std::max(6.0, 3.0 + 2.0 * std::max(std::abs(alpha), std::abs(beta)));
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-4;
    const double pref = std::sqrt(std::abs(std::cos(angles.delta())));

    auto level = [&](int M) {
        const double h = 2.0 * L / (M - 1);
        std::vector<cplx> rows(static_cast<std::size_t>(M), cplx(0.0));
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
            const double ap = blend_coord(-L, L, M, static_cast<int>(i));
            const double wi = (i == 0 || i + 1 == static_cast<std::size_t>(M)) ? 0.5 : 1.0;
            const cplx ka = kernel_value(beta, ap, tb);
            cplx acc(0.0, 0.0);
            for (int j = 0; j < M; ++j) {
                const double bp = blend_coord(-L, L, M, j);
                const double wj = (j == 0 || j == M - 1) ? 0.5 : 1.0;
                const cplx weyl = trace_product(theta_op, displacement_reference(ap, bp, N));
                acc += wj * kernel_value(alpha, -bp, ta) * weyl;
            }
            rows[i] = wi * ka * acc;
        });
        cplx total(0.0, 0.0);
        for (const cplx& r : rows) total += r;
        return cplx(pref * h * h * total);
    };

    int M = quadrature.base_points > 0 ? quadrature.base_points : 321;
    cplx prev = level(M);
    for (int d = 0; d < quadrature.max_doublings; ++d) {
        M = 2 * M - 1;
        const cplx cur = level(M);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureDivergence("oracle_bifrac_wigner: transform did not settle under doubling");
}

PhaseSpaceGrid q_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis,
                          const BifracAngles& angles, int N) {
    if (static_cast<int>(theta_op.rows()) != N)
        throw DimTooSmall("q_function: operator dimension must match N");
    PhaseSpaceGrid g;
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    g.kind = half_pair(angles) ? GridKind::Q : GridKind::BIFRAC_Q;
    g.angles = angles;
    g.fock_dim = N;
    g.values.assign(static_cast<std::size_t>(alpha_axis.count) * beta_axis.count, cplx(0.0));
    std::atomic<bool> all_trusted{operator_report(theta_op).trusted};
    parallel_for(static_cast<std::size_t>(alpha_axis.count), [&](std::size_t ia) {
        const double a = alpha_axis.coord(static_cast<int>(ia));
        for (int ib = 0; ib < beta_axis.count; ++ib) {
            const Vec psi = coherent_amplitudes(a, beta_axis.coord(ib), angles, N);
            if (!state_report(psi).trusted) all_trusted.store(false, std::memory_order_relaxed);
            g.values[ia * static_cast<std::size_t>(beta_axis.count) + ib] =
                psi.dot(theta_op * psi);
        }
    });
    g.trusted = all_trusted.load();
    return g;
}

namespace {

struct OverlapTable {
    double L = 0.0;
    int M = 0;
    // f(i,j) = <psi(-g_i,-d_j)|Theta|psi(g_i,d_j)> e^{g_i^2+d_j^2}, i-major, zero outside
    // the disk g^2+d^2 <= L^2. The square's corners sit at twice the rim radius^2 where
    // the boosted overlap loses all double-precision significance, so they are excluded
    // from both the integral and the tail certificate.
    std::vector<cplx> f;
    double ring_fraction = 0.0;

    double coord(int i) const { return blend_coord(-L, L, M, i); }
    double weight(int i) const { return (i == 0 || i == M - 1) ? 0.5 : 1.0; }
};

OverlapTable build_overlap_table(const Mat& theta_op, const BifracAngles& angles, int N, double L,
                                 int M) {
    OverlapTable t;
    t.L = L;
    t.M = M;
    t.f.assign(static_cast<std::size_t>(M) * M, cplx(0.0));
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
        const double gcoord = blend_coord(-L, L, M, static_cast<int>(i));
        for (int j = 0; j < M; ++j) {
            const double dcoord = blend_coord(-L, L, M, j);
            if (gcoord * gcoord + dcoord * dcoord > L * L) continue;
            const Vec ket = coherent_amplitudes(gcoord, dcoord, angles, N);
            const Vec bra = coherent_amplitudes(-gcoord, -dcoord, angles, N);
            t.f[i * static_cast<std::size_t>(M) + j] =
                std::exp(gcoord * gcoord + dcoord * dcoord) * bra.dot(theta_op * ket);
        }
    });
    const double h = 2.0 * L / (M - 1);
    const double rim_lo = (L - 2.0 * h) * (L - 2.0 * h);
    double total = 0.0;
    double ring = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const double m = t.weight(i) * t.weight(j) *
                             std::abs(t.f[static_cast<std::size_t>(i) * M + j]);
            total += m;
            const double gi = t.coord(i);
            const double dj = t.coord(j);
            if (gi * gi + dj * dj >= rim_lo) ring += m;
        }
    t.ring_fraction = total > 0.0 ? ring / total : 1.0;
    return t;
}

std::vector<cplx> eval_p_from_table(const OverlapTable& t,
                                    const std::vector<std::pair<double, double>>& points) {
    const double h = 2.0 * t.L / (t.M - 1);
    // Column sums over delta depend only on alpha; reuse them across targets
    // sharing the alpha value.
    std::map<double, std::vector<cplx>> col_sums;
    for (const auto& pt : points) {
        if (col_sums.count(pt.first)) continue;
        std::vector<cplx>& s = col_sums[pt.first];
        s.assign(static_cast<std::size_t>(t.M), cplx(0.0));
        for (int i = 0; i < t.M; ++i) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < t.M; ++j)
                acc += t.weight(j) * std::exp(cplx(0.0, -2.0 * pt.first * t.coord(j))) *
                       t.f[static_cast<std::size_t>(i) * t.M + j];
            s[static_cast<std::size_t>(i)] = acc;
        }
    }
    std::vector<cplx> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double alpha = points[k].first;
        const double beta = points[k].second;
        const std::vector<cplx>& s = col_sums[alpha];
        cplx acc(0.0, 0.0);
        for (int i = 0; i < t.M; ++i)
            acc += t.weight(i) * std::exp(cplx(0.0, 2.0 * beta * t.coord(i))) *
                   s[static_cast<std::size_t>(i)];
        out[k] = (h * h / kPi) * std::exp(alpha * alpha + beta * beta) * acc;
    }
    return out;
}

}  // namespace

std::vector<cplx> bifrac_p_batch(const Mat& theta_op,
                                 const std::vector<std::pair<double, double>>& points,
                                 const BifracAngles& angles, const QuadratureSettings& quadrature,
                                 int N) {
    if (static_cast<int>(theta_op.rows()) != N)
        throw DimTooSmall("bifrac_p_batch: operator dimension must match N");
    const double L = quadrature.half_width > 0.0 ? quadrature.half_width : 6.5;
    const int M0 = quadrature.base_points > 0 ? quadrature.base_points : 161;
    const double tol = quadrature.tol > 0.0 ? quadrature.tol : 1e-3;

    OverlapTable table = build_overlap_table(theta_op, angles, N, L, M0);
    if (table.ring_fraction > 1e-6) {
        std::ostringstream os;
        os << "bifrac_p_batch: boundary mass fraction " << table.ring_fraction
           << " of the overlap integrand exceeds 1e-6; the P integral is not that of a smooth "
              "function on this domain";
        throw PNotSmooth(os.str());
    }
    std::vector<cplx> coarse = eval_p_from_table(table, points);
    OverlapTable fine = build_overlap_table(theta_op, angles, N, L, 2 * M0 - 1);
    std::vector<cplx> refined = eval_p_from_table(fine, points);
    double worst = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k)
        worst = std::max(worst,
                         std::abs(refined[k] - coarse[k]) / (1.0 + std::abs(refined[k])));
    if (worst > tol) {
        std::ostringstream os;
        os << "bifrac_p_batch: value change " << worst
           << " under grid doubling exceeds " << tol << "; refusing a non-convergent P value";
        throw PNotSmooth(os.str());
    }
    return refined;
}

cplx bifrac_p_function(const Mat& theta_op, double alpha, double beta, const BifracAngles& angles,
                       const QuadratureSettings& quadrature, int N) {
    return bifrac_p_batch(theta_op, {{alpha, beta}}, angles, quadrature, N)[0];
}

PhaseSpaceGrid bifrac_p_grid(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis,
                             const BifracAngles& angles, const QuadratureSettings& quadrature,
                             int N) {
    std::vector<std::pair<double, double>> points;
    points.reserve(static_cast<std::size_t>(alpha_axis.count) * beta_axis.count);
    for (int ia = 0; ia < alpha_axis.count; ++ia)
        for (int ib = 0; ib < beta_axis.count; ++ib)
            points.emplace_back(alpha_axis.coord(ia), beta_axis.coord(ib));
    PhaseSpaceGrid g;
    g.alpha_axis = alpha_axis;
    g.beta_axis = beta_axis;
    g.kind = GridKind::BIFRAC_P;
    g.angles = angles;
    g.fock_dim = N;
    g.values = bifrac_p_batch(theta_op, points, angles, quadrature, N);
    g.trusted = operator_report(theta_op).trusted;
    return g;
}

}  // namespace bifrac
