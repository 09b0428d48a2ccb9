#pragma once
#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "gblab/grid.hpp"

// Bigraded forms on a sampled chart: base-degree p differential forms with
// values in the exterior algebra of a rank-n inner-product space ("fiber").
// An element of bidegree (p,q) is stored as coefficients indexed by a pair of
// bitmasks (base axes, fiber generators), both kept in increasing index
// order.  The product rule is
//
//   (phi a) ^ (psi b) = (-1)^{deg psi * deg a} (phi ^ psi)(a ^ b)
//
// for base forms phi, psi and fiber elements a, b: a base one-form and a
// fiber generator anticommute.
namespace gblab::forms {

using grid::ChartGrid;
using grid::GridFn;
using grid::GridPtr;
using grid::Quadrature;

using Mask = std::uint32_t;

inline int degree(Mask m) { return std::popcount(m); }

// Sign of merging two disjoint increasing index sets into one increasing set
// (number of transpositions moving b's elements past a's larger elements).
int merge_sign(Mask a, Mask b);

// Sign of inserting index j in front of the increasing set m: dx_j ^ dx_m.
int insert_sign(Mask m, int j);

struct MixedForm {
  GridPtr grid;
  int fiber_rank = 0;
  int p = 0, q = 0;
  std::map<std::pair<Mask, Mask>, GridFn> coeff;

  MixedForm() = default;
  MixedForm(GridPtr g, int rank, int p_, int q_);

  // Accumulate scale*c onto the (base, fiber) coefficient (masks must have
  // the right degrees).
  void add_term(Mask base, Mask fiber, const GridFn& c, double scale = 1.0);

  // Same, from (possibly unsorted, possibly repeating) index lists; repeats
  // kill the term and sorting contributes the permutation sign.
  void add_term_indices(std::vector<int> base, std::vector<int> fiber,
                        const GridFn& c, double scale = 1.0);

  const GridFn* find(Mask base, Mask fiber) const;
  double max_abs() const;
  bool is_zero() const { return coeff.empty(); }
  void drop_zero_terms();
};

MixedForm scale(const MixedForm& a, double s);
MixedForm add(const MixedForm& a, const MixedForm& b);        // same bidegree
MixedForm subtract(const MixedForm& a, const MixedForm& b);   // same bidegree
MixedForm multiply(const MixedForm& a, const GridFn& f);      // pointwise scalar
MixedForm wedge(const MixedForm& a, const MixedForm& b);

// Exterior derivative in the base directions: central differences in the
// interior, one-sided second-order stencils at the chart boundary.  Top base
// degree returns the zero (p+1,q)-form.
MixedForm exterior_derivative(const MixedForm& a);

// Interior product with a fiber vector field (components on the grid); the
// skew-derivation with iota(V)(e_i) = <V, e_i>, anticommuting past base
// one-forms.
MixedForm interior_product(const std::vector<GridFn>& v, const MixedForm& a);

// Supertrace: coefficient of the full fiber volume element e_1 ^ ... ^ e_n.
// DegreeError unless q == fiber_rank.
MixedForm supertrace(const MixedForm& a);

// Integral over the chart; requires bidegree (dim, 0).
double integrate(const MixedForm& a, Quadrature q);

// Fiber integration ("slant product") over a subset of base axes.  A term is
// written base-axes-first, fiber-axes-last, integrated over the fiber axes;
// terms missing any fiber axis contribute zero.  Before integrating, the
// coefficient magnitude on the indicated truncation edges must not exceed
// decay_tol (TruncationError otherwise).  `check_lower`/`check_upper` select
// which edges of each fiber axis count as truncation edges (a ray fiber has
// a genuine boundary at its lower edge, so only the upper edge is checked).
struct FiberEdgeCheck {
  bool check_lower = true;
  bool check_upper = true;
};
MixedForm fiber_integrate(const MixedForm& a, Mask fiber_axes, Quadrature q,
                          double decay_tol,
                          const std::map<int, FiberEdgeCheck>& edges = {});

// Restriction of a form to one boundary face of a fiber axis (the axis is
// removed from the chart); terms containing the axis restrict to zero.
MixedForm boundary_restrict(const MixedForm& a, int axis, bool lower);

// Embed a form into a larger chart: axis_map[i] = index in the new grid of
// the old axis i; coefficients are constant along the new axes.
MixedForm promote(const MixedForm& a, GridPtr target,
                  const std::vector<int>& axis_map);

// Formal sum of mixed bidegrees (exponentials, curvature elements, ...).
struct MixedSum {
  GridPtr grid;
  int fiber_rank = 0;
  std::map<std::pair<int, int>, MixedForm> parts;

  MixedSum() = default;
  MixedSum(GridPtr g, int rank) : grid(std::move(g)), fiber_rank(rank) {}

  void accumulate(const MixedForm& f);
  const MixedForm* part(int p, int q) const;
};

MixedSum sum_add(const MixedSum& a, const MixedSum& b);
MixedSum sum_scale(const MixedSum& a, double s);
MixedSum sum_wedge(const MixedSum& a, const MixedSum& b);

// Supertrace of a formal sum: parts with q < fiber_rank have no volume
// component and contribute zero; the rest project as above.
MixedSum supertrace_sum(const MixedSum& a);

// exp of an even-total-degree element: the scalar (0,0) part exponentiates
// pointwise, the rest is nilpotent so the series terminates at the degree
// cap.  DegreeError if any part has odd total degree.
MixedSum exp_even(const MixedSum& x);

}  // namespace gblab::forms
