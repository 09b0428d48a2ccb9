#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "gblab/errors.hpp"

// Rectangular sample grids and tensor-product quadrature.  Everything that
// touches differential forms is discretized on a ChartGrid: an axis-aligned
// box sampled uniformly along each axis.  Axis 0 varies fastest in the flat
// storage order.
namespace gblab::grid {

enum class Quadrature { trapezoid, simpson };

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int res = 3;  // number of sample points, >= 3 so one-sided stencils exist
};

struct ChartGrid {
  std::vector<Axis> axes;

  explicit ChartGrid(std::vector<Axis> ax);

  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t size() const { return total_; }
  std::size_t stride(int a) const { return strides_[a]; }
  double spacing(int a) const;
  double max_spacing() const;
  double coord(int a, int i) const;

  // flat index <-> per-axis indices
  void unravel(std::size_t flat, int* idx) const;
  std::size_t ravel(const int* idx) const;

  // grid with one axis removed (for fiber integration)
  ChartGrid without_axis(int a) const;

 private:
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

using GridPtr = std::shared_ptr<const ChartGrid>;
using GridFn = std::vector<double>;  // one double per grid point

GridPtr make_grid(std::vector<Axis> axes);

// Sample a callable f(x[0..dim)) at every grid point.
GridFn sample(const ChartGrid& g, const std::function<double(const double*)>& f);

GridFn constant(const ChartGrid& g, double value);

// Pointwise helpers (sizes must match the grid).
void axpy(GridFn& y, double a, const GridFn& x);  // y += a*x
GridFn scaled(const GridFn& x, double a);
GridFn product(const GridFn& a, const GridFn& b);
double max_abs(const GridFn& f);

// Partial derivative along `axis`: central differences in the interior,
// second-order one-sided stencils at the chart boundary.
GridFn derivative(const ChartGrid& g, const GridFn& f, int axis);

// Quadrature weight for sample i on an axis with n points.
double axis_weight(const Axis& ax, int i, Quadrature q);

// Integral of f over the whole grid (tensor-product rule).
double integrate(const ChartGrid& g, const GridFn& f, Quadrature q);

// Contract one axis by quadrature: result lives on g.without_axis(axis).
GridFn integrate_axis(const ChartGrid& g, const GridFn& f, int axis, Quadrature q);

// Streaming n-dimensional quadrature of a callable; no grid storage.  Used
// where materializing the grid would be too large (e.g. 121^4 samples).
double integrate_nd(const std::vector<Axis>& axes,
                    const std::function<double(const double*)>& f, Quadrature q);

// Largest |f| over the two boundary slices of `axis` (decay diagnostics).
double edge_max(const ChartGrid& g, const GridFn& f, int axis, bool lower);

}  // namespace gblab::grid
