#include "gblab/thom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gblab/constants.hpp"
#include "gblab/errors.hpp"

namespace gblab::thom {

using forms::Mask;

namespace {

constexpr double kPi = std::numbers::pi;

double tau_normalization(int n) {
  const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign / std::pow(kPi, n / 2.0);
}

MixedSum as_sum(const MixedForm& f) {
  MixedSum s(f.grid, f.fiber_rank);
  s.accumulate(f);
  return s;
}

MixedForm section_form(const SectionField& v, int rank, const GridPtr& g) {
  MixedForm f(g, rank, 0, 1);
  for (int i = 0; i < rank; ++i) f.add_term(0, Mask{1} << i, v.components[i]);
  f.drop_zero_terms();
  return f;
}

void require_unit(const SectionField& v) {
  if (unit_norm_residual(v) > 1e-10)
    throw NormError("section must be unit length on the boundary chart");
}

}  // namespace

double unit_norm_residual(const SectionField& v) {
  double r = 0.0;
  for (std::size_t p = 0; p < v.grid->size(); ++p) {
    double s = 0.0;
    for (const GridFn& c : v.components) s += c[p] * c[p];
    r = std::max(r, std::abs(s - 1.0));
  }
  return r;
}

MixedSum curvature_operator(const CurvatureSet& curv) {
  MixedSum out(curv.grid, curv.rank);
  MixedForm r = frames::quadratic_curvature_element(curv, curv.rank);
  if (!r.is_zero()) out.accumulate(r);
  return out;
}

MixedForm covariant_differential(const SectionField& v, const FrameConnection& conn) {
  const int n = conn.rank;
  if (v.rank() != n) throw DimensionError("section components do not match the rank");
  MixedForm out(conn.grid, n, 1, 1);
  for (int i = 0; i < n; ++i) {
    MixedForm vi(conn.grid, n, 0, 0);
    vi.add_term(0, 0, v.components[i]);
    MixedForm di = forms::exterior_derivative(vi);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      di = forms::add(di, forms::multiply(conn.omega_at(i, j), v.components[j]));
    }
    for (const auto& [masks, c] : di.coeff) out.add_term(masks.first, Mask{1} << i, c);
  }
  out.drop_zero_terms();
  return out;
}

MixedSum phi_element(const SectionField& v, const FrameConnection& conn) {
  MixedSum out(conn.grid, conn.rank);

  GridFn neg_sq(conn.grid->size(), 0.0);
  for (const GridFn& c : v.components)
    for (std::size_t p = 0; p < neg_sq.size(); ++p) neg_sq[p] -= c[p] * c[p];
  MixedForm scalar(conn.grid, conn.rank, 0, 0);
  scalar.add_term(0, 0, neg_sq);
  if (!scalar.is_zero()) out.accumulate(scalar);

  MixedForm dv = covariant_differential(v, conn);
  if (!dv.is_zero()) out.accumulate(dv);

  MixedSum r = curvature_operator(curvature(conn));
  return forms::sum_add(out, r);
}

MixedForm thom_pullback(const SectionField& v, const FrameConnection& conn, double s) {
  const int n = conn.rank;
  SectionField sv{v.grid, v.components};
  for (GridFn& c : sv.components) c = grid::scaled(c, s);
  MixedSum traced = forms::supertrace_sum(forms::exp_even(phi_element(sv, conn)));
  const MixedForm* top = traced.part(n, 0);
  if (!top) return MixedForm(conn.grid, n, n, 0);
  return forms::scale(*top, tau_normalization(n));
}

double rotation_index_limit(const SectionField& v, const FrameConnection& conn,
                            std::vector<double> s_schedule, Quadrature q) {
  if (s_schedule.empty()) throw DomainError("empty scale schedule");
  const GridPtr& g = v.grid;

  std::size_t argmin = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g->size(); ++p) {
    double s = 0.0;
    for (const GridFn& c : v.components) s += c[p] * c[p];
    if (s < best) {
      best = s;
      argmin = p;
    }
  }
  std::vector<int> idx(g->dim());
  g->unravel(argmin, idx.data());
  for (int a = 0; a < g->dim(); ++a)
    if (idx[a] == 0 || idx[a] == g->axes[a].res - 1)
      throw LocusError("zero of the section sits on the chart boundary");

  std::sort(s_schedule.begin(), s_schedule.end());
  double value = 0.0;
  for (double s : s_schedule) value = forms::integrate(thom_pullback(v, conn, s), q);
  return value;
}

MixedForm boundary_curvature_moment(const SectionField& v, const FrameConnection& conn) {
  require_unit(v);
  const int n = conn.rank;
  const GridPtr& g = conn.grid;

  MixedSum exp_r = forms::exp_even(curvature_operator(curvature(conn)));
  MixedForm vform = section_form(v, n, g);
  MixedForm dv = covariant_differential(v, conn);

  MixedForm acc(g, n, n - 1, 0);
  MixedForm power(g, n, 0, 0);  // (nabla V)^j / j!, starting at j = 0
  power.add_term(0, 0, grid::constant(*g, 1.0));
  for (int j = 0; j < n; ++j) {
    if (j > 0) power = forms::scale(forms::wedge(power, dv), 1.0 / j);
    MixedSum full = forms::sum_wedge(as_sum(forms::wedge(vform, power)), exp_r);
    MixedSum traced = forms::supertrace_sum(full);
    if (const MixedForm* part = traced.part(n - 1, 0))
      acc = forms::add(acc, forms::scale(*part, constants::gaussian_half_moment(j)));
  }
  return forms::scale(acc, tau_normalization(n));
}

GeodesicCurvatureForm geodesic_curvature_even(const SectionField& v,
                                              const FrameConnection& conn) {
  if (conn.rank % 2 != 0)
    throw DimensionError("even-rank boundary form requested for odd rank");
  return {boundary_curvature_moment(v, conn)};
}

GeodesicCurvatureForm geodesic_curvature_odd(const SectionField& v,
                                             const FrameConnection& conn) {
  const int n = conn.rank;
  if (n % 2 != 1) throw DimensionError("odd-rank boundary form requested for even rank");
  require_unit(v);
  const GridPtr& g = conn.grid;

  MixedForm dv = covariant_differential(v, conn);
  MixedSum arg = curvature_operator(curvature(conn));
  MixedForm dv2 = forms::scale(forms::wedge(dv, dv), 0.25);
  if (!dv2.is_zero()) arg = forms::sum_add(arg, as_sum(dv2));

  MixedSum full = forms::sum_wedge(as_sum(section_form(v, n, g)), forms::exp_even(arg));
  MixedSum traced = forms::supertrace_sum(full);
  MixedForm out(g, n, n - 1, 0);
  if (const MixedForm* part = traced.part(n - 1, 0)) out = *part;
  return {forms::scale(out, tau_normalization(n) * std::sqrt(kPi) / 2.0)};
}

MixedForm boundary_curvature_direct(const SectionField& v, const FrameConnection& conn,
                                    double t_radius, int t_res) {
  require_unit(v);
  const int n = conn.rank;
  const GridPtr& base = conn.grid;
  const int bd = base->dim();

  std::vector<grid::Axis> axes = base->axes;
  axes.push_back({0.0, t_radius, t_res});
  GridPtr prod = grid::make_grid(std::move(axes));
  std::vector<int> axis_map(bd);
  for (int a = 0; a < bd; ++a) axis_map[a] = a;

  FrameConnection lifted;
  lifted.grid = prod;
  lifted.rank = n;
  for (const auto& [k, om] : conn.omega)
    lifted.omega.emplace(k, forms::promote(om, prod, axis_map));

  // W = t * V(x) on the extended chart.
  SectionField w;
  w.grid = prod;
  w.components.assign(n, GridFn(prod->size()));
  std::vector<int> idx(prod->dim());
  for (std::size_t p = 0; p < prod->size(); ++p) {
    prod->unravel(p, idx.data());
    const double t = prod->coord(bd, idx[bd]);
    const std::size_t bp = p % base->size();  // t is the slowest axis
    for (int i = 0; i < n; ++i) w.components[i][p] = t * v.components[i][bp];
  }

  MixedForm tau = thom_pullback(w, lifted, 1.0);
  std::map<int, forms::FiberEdgeCheck> edges;
  edges[bd] = {false, true};  // ray: genuine boundary at t = 0
  MixedForm slant = forms::fiber_integrate(tau, Mask{1} << bd, Quadrature::simpson,
                                           1e-8, edges);
  return forms::scale(slant, (n % 2 == 0) ? -1.0 : 1.0);
}

MixedForm transgression_form(const FrameConnection& conn, int phi_res) {
  if (conn.rank != 2) throw FrameError("transgression chart is built for rank 2");
  const GridPtr& base = conn.grid;
  const int bd = base->dim();

  std::vector<grid::Axis> axes = base->axes;
  axes.push_back({0.0, 2.0 * kPi, phi_res});
  GridPtr prod = grid::make_grid(std::move(axes));
  std::vector<int> axis_map(bd);
  for (int a = 0; a < bd; ++a) axis_map[a] = a;

  FrameConnection lifted;
  lifted.grid = prod;
  lifted.rank = 2;
  for (const auto& [k, om] : conn.omega)
    lifted.omega.emplace(k, forms::promote(om, prod, axis_map));

  SectionField u;
  u.grid = prod;
  u.components = {
      grid::sample(*prod, [bd](const double* y) { return std::cos(y[bd]); }),
      grid::sample(*prod, [bd](const double* y) { return std::sin(y[bd]); })};

  return forms::scale(boundary_curvature_moment(u, lifted), -1.0);
}

double transgression_check(const FrameConnection& conn, int phi_res) {
  MixedForm te = transgression_form(conn, phi_res);
  MixedForm dte = forms::exterior_derivative(te);

  MixedForm e = frames::euler_form(frames::curvature(conn));
  std::vector<int> axis_map(conn.grid->dim());
  for (int a = 0; a < conn.grid->dim(); ++a) axis_map[a] = a;
  MixedForm pullback = forms::promote(e, te.grid, axis_map);

  return forms::subtract(dte, pullback).max_abs();
}

MixedForm flat_thom_form(int n, double radius, int res) {
  if (n < 1) throw DimensionError("fiber rank must be positive");
  std::vector<grid::Axis> axes(n, grid::Axis{-radius, radius, res});
  GridPtr g = grid::make_grid(std::move(axes));

  SectionField taut;
  taut.grid = g;
  taut.components.resize(n);
  for (int i = 0; i < n; ++i)
    taut.components[i] = grid::sample(*g, [i](const double* y) { return y[i]; });

  FrameConnection flat;
  flat.grid = g;
  flat.rank = n;
  return thom_pullback(taut, flat, 1.0);
}

double flat_thom_fiber_integral_streaming(int n, double radius, int res, Quadrature q) {
  if (n < 1) throw DimensionError("fiber rank must be positive");
  std::vector<grid::Axis> axes(n, grid::Axis{-radius, radius, res});
  const double norm = std::pow(kPi, -n / 2.0);
  return grid::integrate_nd(
      axes,
      [n, norm](const double* t) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += t[i] * t[i];
        return norm * std::exp(-r2);
      },
      q);
}

}  // namespace gblab::thom
