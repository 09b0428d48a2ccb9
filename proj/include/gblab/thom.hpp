#pragma once
#include <vector>

#include "gblab/frame.hpp"

// Gaussian-weighted Euler-class machinery: the even element Phi(V,nabla) =
// -|V|^2 + nabla V + R, its supertraced exponential (the pulled-back Thom
// form), rotation-index localization, the boundary curvature form obtained
// by integrating the Thom form along rays, and the transgression identity
// d(Te) = pullback of the Euler form on the circle bundle.
//
// Normalization (fixed by the flat-disk and flat-ball fixtures):
//   tau(V,nabla) = ((-1)^[n/2] / pi^{n/2}) Tr_s[exp Phi(V,nabla)]
// so tau(0,nabla) is the Euler form and the flat fiber integral is 1.
namespace gblab::thom {

using forms::MixedForm;
using forms::MixedSum;
using frames::CurvatureSet;
using frames::FrameConnection;
using grid::GridFn;
using grid::GridPtr;
using grid::Quadrature;

struct SectionField {
  GridPtr grid;
  std::vector<GridFn> components;  // V = sum_i v_i e_i

  int rank() const { return static_cast<int>(components.size()); }
};

// max over the grid of |sum_i v_i^2 - 1|.
double unit_norm_residual(const SectionField& v);

// R = -(1/4) sum_{ij} Omega_ij e_i e_j as a (2,2) summand.
MixedSum curvature_operator(const CurvatureSet& curv);

// nabla V = sum_i (dv_i + sum_j omega_ij v_j) e_i, bidegree (1,1).
MixedForm covariant_differential(const SectionField& v, const FrameConnection& conn);

// Phi(V,nabla) = -|V|^2 + nabla V + R (bidegrees (0,0) + (1,1) + (2,2)).
MixedSum phi_element(const SectionField& v, const FrameConnection& conn);

// tau(sV,nabla) as an (n,0)-form on the chart of V.
MixedForm thom_pullback(const SectionField& v, const FrameConnection& conn, double s);

// integral of tau(sV,nabla) at the largest scale in the schedule; the
// localized value is the rotation index of the interior zero of V.
// LocusError when the minimum of |V| sits on the chart boundary layer.
double rotation_index_limit(const SectionField& v, const FrameConnection& conn,
                            std::vector<double> s_schedule,
                            Quadrature q = Quadrature::trapezoid);

struct GeodesicCurvatureForm {
  MixedForm form;  // bidegree (n-1, 0) on the boundary chart
};

// Shared moment-series core, valid for every rank: the ray integral of
// tau(tV) evaluated termwise with exact half-line Gaussian moments,
//   c_n sum_j (M_j / j!) Tr_s[V (nabla V)^j exp(R)],  M_j = Gamma((j+1)/2)/2.
// NormError unless V is unit length.
MixedForm boundary_curvature_moment(const SectionField& v, const FrameConnection& conn);

// Even-rank boundary form (moment series); DimensionError on odd rank.
GeodesicCurvatureForm geodesic_curvature_even(const SectionField& v,
                                              const FrameConnection& conn);

// Odd-rank closed form, no t-quadrature:
//   c_n (sqrt(pi)/2) Tr_s[V exp((nabla V)^2/4 + R)].
// DimensionError on even rank.
GeodesicCurvatureForm geodesic_curvature_odd(const SectionField& v,
                                             const FrameConnection& conn);

// Independent route for the same form: build tau(tV) on the chart extended
// by a ray axis t in [0, t_radius] and integrate the ray out numerically
// (Simpson; t_res must be odd).  Agreement with the moment route is a
// library invariant.
MixedForm boundary_curvature_direct(const SectionField& v, const FrameConnection& conn,
                                    double t_radius, int t_res);

// Transgressed Euler form of a rank-2 connection, living on the chart
// extended by the fiber-circle angle phi: Te with d(Te) = pullback of the
// Euler form.  FrameError for ranks other than 2.
MixedForm transgression_form(const FrameConnection& conn, int phi_res);

// max-coefficient residual of d(Te) - pullback(euler_form).
double transgression_check(const FrameConnection& conn, int phi_res);

// Flat bundle over a point: unit fiber integral of the flat Thom form.
// `machinery` builds the form via phi_element/exp/supertrace on a stored
// grid; the streaming variant evaluates the same coefficient without
// materializing the grid (needed at 121^4 samples).
MixedForm flat_thom_form(int n, double radius, int res);
double flat_thom_fiber_integral_streaming(int n, double radius, int res, Quadrature q);

}  // namespace gblab::thom
