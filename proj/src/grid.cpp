#include "gblab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gblab::grid {

ChartGrid::ChartGrid(std::vector<Axis> ax) : axes(std::move(ax)) {
  if (axes.empty()) throw GridError("chart grid needs at least one axis");
  strides_.resize(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].res < 3) throw GridError("axis resolution must be >= 3");
    if (!(axes[a].hi > axes[a].lo)) throw GridError("axis bounds must satisfy lo < hi");
    strides_[a] = total_;
    total_ *= static_cast<std::size_t>(axes[a].res);
  }
}

double ChartGrid::spacing(int a) const {
  const Axis& ax = axes[a];
  return (ax.hi - ax.lo) / (ax.res - 1);
}

double ChartGrid::max_spacing() const {
  double h = 0.0;
  for (int a = 0; a < dim(); ++a) h = std::max(h, spacing(a));
  return h;
}

double ChartGrid::coord(int a, int i) const { return axes[a].lo + spacing(a) * i; }

void ChartGrid::unravel(std::size_t flat, int* idx) const {
  for (std::size_t a = 0; a < axes.size(); ++a) {
    idx[a] = static_cast<int>(flat % axes[a].res);
    flat /= axes[a].res;
  }
}

std::size_t ChartGrid::ravel(const int* idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) flat += strides_[a] * idx[a];
  return flat;
}

ChartGrid ChartGrid::without_axis(int a) const {
  std::vector<Axis> ax = axes;
  ax.erase(ax.begin() + a);
  if (ax.empty()) throw GridError("cannot drop the last axis of a grid");
  return ChartGrid(std::move(ax));
}

GridPtr make_grid(std::vector<Axis> axes) {
  return std::make_shared<const ChartGrid>(std::move(axes));
}

GridFn sample(const ChartGrid& g, const std::function<double(const double*)>& f) {
  GridFn out(g.size());
  std::vector<int> idx(g.dim());
  std::vector<double> x(g.dim());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx.data());
    for (int a = 0; a < g.dim(); ++a) x[a] = g.coord(a, idx[a]);
    out[p] = f(x.data());
  }
  return out;
}

GridFn constant(const ChartGrid& g, double value) { return GridFn(g.size(), value); }

void axpy(GridFn& y, double a, const GridFn& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

GridFn scaled(const GridFn& x, double a) {
  GridFn out(x);
  for (double& v : out) v *= a;
  return out;
}

GridFn product(const GridFn& a, const GridFn& b) {
  GridFn out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double max_abs(const GridFn& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

GridFn derivative(const ChartGrid& g, const GridFn& f, int axis) {
  const int n = g.axes[axis].res;
  const double h = g.spacing(axis);
  const std::size_t s = g.stride(axis);
  GridFn out(g.size());
  std::vector<int> idx(g.dim());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx.data());
    const int i = idx[axis];
    if (i == 0) {
      // difference form of (-3 f0 + 4 f1 - f2) / 2h: kills constants exactly
      out[p] = (4.0 * (f[p + s] - f[p]) - (f[p + 2 * s] - f[p])) / (2.0 * h);
    } else if (i == n - 1) {
      out[p] = (4.0 * (f[p] - f[p - s]) - (f[p] - f[p - 2 * s])) / (2.0 * h);
    } else {
      out[p] = (f[p + s] - f[p - s]) / (2.0 * h);
    }
  }
  return out;
}

double axis_weight(const Axis& ax, int i, Quadrature q) {
  const int n = ax.res;
  const double h = (ax.hi - ax.lo) / (n - 1);
  if (q == Quadrature::trapezoid) {
    return (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  // Simpson needs an odd sample count.
  if (n % 2 == 0) throw GridError("Simpson quadrature needs an odd sample count");
  if (i == 0 || i == n - 1) return h / 3.0;
  return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
}

double integrate(const ChartGrid& g, const GridFn& f, Quadrature q) {
  std::vector<std::vector<double>> w(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    w[a].resize(g.axes[a].res);
    for (int i = 0; i < g.axes[a].res; ++i) w[a][i] = axis_weight(g.axes[a], i, q);
  }
  double total = 0.0;
  std::vector<int> idx(g.dim());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx.data());
    double wp = f[p];
    for (int a = 0; a < g.dim(); ++a) wp *= w[a][idx[a]];
    total += wp;
  }
  return total;
}

GridFn integrate_axis(const ChartGrid& g, const GridFn& f, int axis, Quadrature q) {
  const ChartGrid reduced = g.without_axis(axis);
  GridFn out(reduced.size(), 0.0);
  const int n = g.axes[axis].res;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = axis_weight(g.axes[axis], i, q);

  std::vector<int> idx(g.dim());
  std::vector<int> ridx(reduced.dim());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx.data());
    int r = 0;
    for (int a = 0; a < g.dim(); ++a)
      if (a != axis) ridx[r++] = idx[a];
    out[reduced.ravel(ridx.data())] += w[idx[axis]] * f[p];
  }
  return out;
}

double integrate_nd(const std::vector<Axis>& axes,
                    const std::function<double(const double*)>& f, Quadrature q) {
  const int d = static_cast<int>(axes.size());
  std::vector<std::vector<double>> w(d);
  std::vector<std::vector<double>> xs(d);
  for (int a = 0; a < d; ++a) {
    const int n = axes[a].res;
    const double h = (axes[a].hi - axes[a].lo) / (n - 1);
    w[a].resize(n);
    xs[a].resize(n);
    for (int i = 0; i < n; ++i) {
      w[a][i] = axis_weight(axes[a], i, q);
      xs[a][i] = axes[a].lo + h * i;
    }
  }
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  double total = 0.0;
  bool done = false;
  while (!done) {
    double wp = 1.0;
    for (int a = 0; a < d; ++a) {
      x[a] = xs[a][idx[a]];
      wp *= w[a][idx[a]];
    }
    total += wp * f(x.data());
    int a = 0;
    for (;; ++a) {
      if (a == d) { done = true; break; }
      if (++idx[a] < axes[a].res) break;
      idx[a] = 0;
    }
  }
  return total;
}

double edge_max(const ChartGrid& g, const GridFn& f, int axis, bool lower) {
  const int edge = lower ? 0 : g.axes[axis].res - 1;
  double m = 0.0;
  std::vector<int> idx(g.dim());
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx.data());
    if (idx[axis] == edge) m = std::max(m, std::abs(f[p]));
  }
  return m;
}

}  // namespace gblab::grid
