#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bifrac/states.hpp"

namespace bifrac {

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    double coord(int i) const { return blend_coord(lo, hi, count, i); }
};

enum class GridKind { WEYL, WIGNER, BIFRAC_WIGNER, Q, BIFRAC_Q, BIFRAC_P };

const char* grid_kind_name(GridKind k);

struct PhaseSpaceGrid {
    Axis alpha_axis;
    Axis beta_axis;
    std::vector<cplx> values;  // row-major, alpha index major
    GridKind kind = GridKind::WEYL;
    std::optional<BifracAngles> angles;
    int fock_dim = 0;
    bool trusted = true;

    cplx at(int ia, int ib) const {
        return values[static_cast<std::size_t>(ia) * beta_axis.count + ib];
    }
};

// W~(alpha,beta) = Tr[Theta D(alpha,beta)] per grid point.
PhaseSpaceGrid weyl_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis);

// W(alpha,beta) = Tr[Theta Pi(alpha,beta)] per grid point.
PhaseSpaceGrid wigner_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis);

// lhs: Wigner value at the point. rhs: (1/2pi) integral da'db'
// W~(a',b') e^{i(beta a' - b' alpha)} by doubling-certified quadrature.
std::pair<cplx, cplx> fourier_relation_check(const Mat& theta_op, double alpha, double beta,
                                             const QuadratureSettings& quadrature = {});

// Tr[Theta U(alpha,beta;angles)].
cplx bifrac_wigner(const Mat& theta_op, double alpha, double beta, const BifracAngles& angles,
                   int N);

PhaseSpaceGrid bifrac_wigner_grid(const Mat& theta_op, const Axis& alpha_axis,
                                  const Axis& beta_axis, const BifracAngles& angles, int N);

// Same value through the double fractional transform of the Weyl function:
// sqrt(|cos(ta-tb)|) integral da'db' K(beta,a';tb) K(alpha,-b';ta) W~(a',b').
// Slow oracle for bifrac_wigner.
cplx oracle_bifrac_wigner(const Mat& theta_op, double alpha, double beta,
                          const BifracAngles& angles, const QuadratureSettings& quadrature = {});

// Q(alpha,beta) = <alpha,beta;angles| Theta |alpha,beta;angles> per grid point.
// Kind is Q when angles are the (pi/2, pi/2) pair, BIFRAC_Q otherwise.
PhaseSpaceGrid q_function(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis,
                          const BifracAngles& angles, int N);

// P through the defining integral
//   (1/pi) e^{alpha^2+beta^2} integral dg dd e^{2i(beta g - alpha d)} e^{g^2+d^2}
//          <-g,-d;angles| Theta |g,d;angles>,
// with a smoothness certificate: boundary tail mass < 1e-6 of the accumulated
// integral and < 1e-3 relative change on grid doubling, else PNotSmooth.
cplx bifrac_p_function(const Mat& theta_op, double alpha, double beta, const BifracAngles& angles,
                       const QuadratureSettings& quadrature, int N);

// Batch version sharing the overlap table across target points (the table
// depends only on the angles and Theta). Single certificate for the batch.
std::vector<cplx> bifrac_p_batch(const Mat& theta_op,
                                 const std::vector<std::pair<double, double>>& points,
                                 const BifracAngles& angles, const QuadratureSettings& quadrature,
                                 int N);

PhaseSpaceGrid bifrac_p_grid(const Mat& theta_op, const Axis& alpha_axis, const Axis& beta_axis,
                             const BifracAngles& angles, const QuadratureSettings& quadrature,
                             int N);

}  // namespace bifrac
