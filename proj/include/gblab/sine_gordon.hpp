#pragma once
#include <vector>

#include "gblab/grid.hpp"

// Net-angle solutions of theta_zw = sin(theta) on a coordinate rectangle,
// the induced hyperbolic area, and the four-corner identity that bounds it.
namespace gblab::sg {

using grid::GridFn;
using grid::GridPtr;
using grid::Quadrature;

struct Rect {
  double a = 0, b = 1;  // z range
  double c = 0, d = 1;  // w range
};

struct SineGordonSolution {
  GridPtr grid;  // 2D chart, axis 0 = z, axis 1 = w
  GridFn theta;
  Rect rect;
};

// theta(z,w) = 4 atan(exp(mu z + w/mu + offset)).  The offset slides the
// soliton front so the samples stay inside (0, pi) on the given rectangle.
SineGordonSolution one_soliton(double mu, double offset, const Rect& r, int res);

// DomainError unless delta < theta < pi - delta on the closed rectangle.
void check_admissible(const SineGordonSolution& sol, double delta = 1e-6);

// max |theta_zw - sin theta| by iterated central differences; requires an
// admissible solution and at least 33 samples per axis.
double sine_gordon_residual(const SineGordonSolution& sol);

// integral of sin(theta) dz dw over the rectangle.
double hyperbolic_area(const SineGordonSolution& sol,
                       Quadrature q = Quadrature::trapezoid);

// theta(b,d) - theta(b,c) - theta(a,d) + theta(a,c).
double hazzidakis_corner_sum(const SineGordonSolution& sol);

struct ConvergenceRow {
  int res = 0;
  double area = 0, corner_sum = 0, residual = 0;
};

// One row per resolution for the same solution family; residual here is
// |area - corner_sum|, the quantity whose O(h^2) decay the table exhibits.
std::vector<ConvergenceRow> convergence_table(double mu, double offset,
                                              const Rect& r,
                                              const std::vector<int>& resolutions);

}  // namespace gblab::sg
