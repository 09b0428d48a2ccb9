#include "gblab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gblab/errors.hpp"

namespace gblab::frames {

using forms::Mask;

MixedForm FrameConnection::omega_at(int i, int j) const {
  if (i == j) return MixedForm(grid, rank, 1, 0);
  auto it = omega.find({std::min(i, j), std::max(i, j)});
  if (it == omega.end()) return MixedForm(grid, rank, 1, 0);
  return i < j ? it->second : forms::scale(it->second, -1.0);
}

MixedForm CurvatureSet::at(int i, int j) const {
  if (i == j) return MixedForm(grid, rank, 2, 0);
  auto it = Omega.find({std::min(i, j), std::max(i, j)});
  if (it == Omega.end()) return MixedForm(grid, rank, 2, 0);
  return i < j ? it->second : forms::scale(it->second, -1.0);
}

CurvatureSet curvature(const FrameConnection& conn) {
  CurvatureSet out{conn.grid, conn.rank, {}};
  for (int i = 0; i < conn.rank; ++i)
    for (int j = i + 1; j < conn.rank; ++j) {
      MixedForm om = forms::exterior_derivative(conn.omega_at(i, j));
      for (int k = 0; k < conn.rank; ++k) {
        if (k == i || k == j) continue;
        om = forms::add(om, forms::wedge(conn.omega_at(i, k), conn.omega_at(k, j)));
      }
      om.drop_zero_terms();
      out.Omega.emplace(std::make_pair(i, j), std::move(om));
    }
  return out;
}

double first_structure_residual(const FrameConnection& conn) {
  if (static_cast<int>(conn.theta.size()) != conn.rank)
    throw FrameError("structure-equation residual needs the full coframe");
  double r = 0.0;
  for (int i = 0; i < conn.rank; ++i) {
    MixedForm res = forms::exterior_derivative(conn.theta[i]);
    for (int j = 0; j < conn.rank; ++j) {
      if (j == i) continue;
      res = forms::add(res, forms::wedge(conn.omega_at(i, j), conn.theta[j]));
    }
    r = std::max(r, res.max_abs());
  }
  return r;
}

double constant_curvature_residual(const FrameConnection& conn, double k) {
  if (static_cast<int>(conn.theta.size()) != conn.rank)
    throw FrameError("curvature residual needs the full coframe");
  CurvatureSet curv = curvature(conn);
  double r = 0.0;
  for (int i = 0; i < conn.rank; ++i)
    for (int j = i + 1; j < conn.rank; ++j) {
      MixedForm res = forms::subtract(
          curv.at(i, j), forms::scale(forms::wedge(conn.theta[i], conn.theta[j]), k));
      r = std::max(r, res.max_abs());
    }
  return r;
}

double bianchi_residual(const FrameConnection& conn) {
  CurvatureSet curv = curvature(conn);
  double r = 0.0;
  for (int i = 0; i < conn.rank; ++i)
    for (int j = i + 1; j < conn.rank; ++j) {
      MixedForm res = forms::exterior_derivative(curv.at(i, j));
      for (int k = 0; k < conn.rank; ++k) {
        if (k == i || k == j) continue;
        res = forms::subtract(res, forms::wedge(curv.at(i, k), conn.omega_at(k, j)));
        res = forms::add(res, forms::wedge(conn.omega_at(i, k), curv.at(k, j)));
      }
      r = std::max(r, res.max_abs());
    }
  return r;
}

namespace {

// Form-valued Pfaffian over the sum of perfect matchings; entries are
// (2,0)-forms, which commute, so factor order is free.
MixedForm pfaffian_form(const CurvatureSet& curv, std::vector<int> live) {
  if (live.empty()) {
    MixedForm one(curv.grid, curv.rank, 0, 0);
    one.add_term(0, 0, grid::constant(*curv.grid, 1.0));
    return one;
  }
  const int i0 = live.front();
  MixedForm acc(curv.grid, curv.rank, static_cast<int>(live.size()), 0);
  for (std::size_t pos = 1; pos < live.size(); ++pos) {
    std::vector<int> rest;
    for (std::size_t t = 1; t < live.size(); ++t)
      if (t != pos) rest.push_back(live[t]);
    MixedForm term = forms::wedge(curv.at(i0, live[pos]), pfaffian_form(curv, rest));
    acc = forms::add(acc, forms::scale(term, (pos % 2 == 1) ? 1.0 : -1.0));
  }
  return acc;
}

}  // namespace

MixedForm euler_form(const CurvatureSet& curv) {
  const int n = curv.rank;
  if (n % 2 != 0) return MixedForm(curv.grid, n, n, 0);
  std::vector<int> live(n);
  for (int i = 0; i < n; ++i) live[i] = i;
  MixedForm pf = pfaffian_form(curv, live);
  const int m = n / 2;
  MixedForm out = forms::scale(pf, 1.0 / std::pow(2.0 * std::numbers::pi, m));
  out.drop_zero_terms();
  return out;
}

MixedForm quadratic_curvature_element(const CurvatureSet& curv, int fiber_rank) {
  if (fiber_rank < curv.rank)
    throw DimensionError("fiber rank too small for the curvature set");
  MixedForm out(curv.grid, fiber_rank, 2, 2);
  for (const auto& [k, om] : curv.Omega)
    for (const auto& [masks, c] : om.coeff)
      out.add_term(masks.first, (Mask{1} << k.first) | (Mask{1} << k.second), c, -0.5);
  out.drop_zero_terms();
  return out;
}

double gauss_equation_residual(const FrameConnection& ambient,
                               const FrameConnection& boundary) {
  if (ambient.grid.get() != boundary.grid.get())
    throw GridError("ambient and boundary frames live on different charts");
  const int n = ambient.rank;
  if (boundary.rank != n - 1)
    throw DimensionError("boundary frame rank must be one below the ambient rank");
  if (static_cast<int>(ambient.theta.size()) != n)
    throw FrameError("adapted frame check needs the restricted ambient coframe");
  if (ambient.theta[n - 1].max_abs() > 1e-9)
    throw FrameError("frame not adapted: normal coframe component does not vanish");

  CurvatureSet amb = curvature(ambient);
  CurvatureSet bdy = curvature(boundary);

  double res = 0.0;
  for (int a = 0; a < n - 1; ++a)
    for (int b = a + 1; b < n - 1; ++b) {
      MixedForm second = forms::wedge(ambient.omega_at(n - 1, a), ambient.omega_at(n - 1, b));
      MixedForm diff = forms::subtract(bdy.at(a, b), forms::add(amb.at(a, b), second));
      res = std::max(res, diff.max_abs());
    }

  // Same identity at the quadratic-element level.  Only tangential curvature
  // components enter; the normal-indexed ones belong to the complementary
  // derivative identity, which this check does not cover.
  CurvatureSet amb_tan{amb.grid, n, {}};
  for (const auto& [k, om] : amb.Omega)
    if (k.second < n - 1) amb_tan.Omega.emplace(k, om);

  MixedForm nabla_normal(ambient.grid, n, 1, 1);
  for (int i = 0; i < n - 1; ++i) {
    MixedForm w = ambient.omega_at(i, n - 1);
    for (const auto& [masks, c] : w.coeff)
      nabla_normal.add_term(masks.first, Mask{1} << i, c);
  }

  MixedForm lhs = quadratic_curvature_element(bdy, n);
  MixedForm rhs = forms::add(quadratic_curvature_element(amb_tan, n),
                             forms::scale(forms::wedge(nabla_normal, nabla_normal), 0.25));
  res = std::max(res, forms::subtract(lhs, rhs).max_abs());
  return res;
}

PrincipalResiduals principal_frame_residuals(const PrincipalFrameData& data,
                                             const FrameConnection& conn) {
  const int n = conn.rank;
  const GridPtr& g = conn.grid;
  if (static_cast<int>(conn.theta.size()) != n)
    throw FrameError("principal-frame residuals need the coframe");
  if (static_cast<int>(data.x.size()) != n ||
      static_cast<int>(data.frame_vectors.size()) != n)
    throw DimensionError("principal data does not match the frame rank");
  for (const auto& vec : data.frame_vectors)
    if (static_cast<int>(vec.size()) != g->dim())
      throw DimensionError("frame vector components do not match the chart dimension");

  for (const GridFn& xi : data.x)
    for (double v : xi)
      if (!(v > 0.0)) throw DomainError("principal functions must stay positive");

  std::vector<GridFn> inv_x(n);
  for (int i = 0; i < n; ++i) {
    inv_x[i].resize(g->size());
    for (std::size_t p = 0; p < g->size(); ++p) inv_x[i][p] = 1.0 / data.x[i][p];
  }

  // dir[j][i] = e_j(x_i): finite-difference gradient contracted with the
  // chart components of e_j.
  std::vector<std::vector<GridFn>> dir(n, std::vector<GridFn>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<GridFn> grad(g->dim());
    for (int a = 0; a < g->dim(); ++a) grad[a] = grid::derivative(*g, data.x[i], a);
    for (int j = 0; j < n; ++j) {
      GridFn d(g->size(), 0.0);
      for (int a = 0; a < g->dim(); ++a)
        grid::axpy(d, 1.0, grid::product(data.frame_vectors[j][a], grad[a]));
      dir[j][i] = std::move(d);
    }
  }

  PrincipalResiduals out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      MixedForm target = forms::subtract(
          forms::multiply(conn.theta[i], grid::product(inv_x[i], dir[j][i])),
          forms::multiply(conn.theta[j], grid::product(inv_x[j], dir[i][j])));
      out.connection =
          std::max(out.connection, forms::subtract(conn.omega_at(i, j), target).max_abs());
      auto it = data.phi.find({i, j});
      if (it != data.phi.end()) {
        MixedForm ptarget = forms::subtract(
            forms::multiply(conn.theta[i], grid::product(inv_x[i], dir[i][j])),
            forms::multiply(conn.theta[j], grid::product(inv_x[j], dir[j][i])));
        out.normal_form =
            std::max(out.normal_form, forms::subtract(it->second, ptarget).max_abs());
      }
    }

  for (int i = 0; i < n; ++i) {
    MixedForm scaled = forms::multiply(conn.theta[i], inv_x[i]);
    out.closedness = std::max(out.closedness, forms::exterior_derivative(scaled).max_abs());
    if (static_cast<int>(data.y.size()) == n) {
      MixedForm yi(g, n, 0, 0);
      yi.add_term(0, 0, data.y[i]);
      out.coordinate = std::max(
          out.coordinate, forms::subtract(forms::exterior_derivative(yi), scaled).max_abs());
    }
  }

  for (std::size_t p = 0; p < g->size(); ++p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += data.x[i][p] * data.x[i][p];
    out.unit_norm = std::max(out.unit_norm, std::abs(s - 1.0));
  }
  return out;
}

FrameConnection apply_group_action(const FrameConnection& conn,
                                   const std::vector<int>& signs) {
  if (static_cast<int>(signs.size()) != conn.rank)
    throw DimensionError("sign vector does not match the frame rank");
  for (int s : signs)
    if (s != 1 && s != -1) throw DomainError("group element signs must be +-1");
  FrameConnection out;
  out.grid = conn.grid;
  out.rank = conn.rank;
  out.theta.reserve(conn.theta.size());
  for (std::size_t i = 0; i < conn.theta.size(); ++i)
    out.theta.push_back(forms::scale(conn.theta[i], signs[i]));
  for (const auto& [k, om] : conn.omega)
    out.omega.emplace(k, forms::scale(om, signs[k.first] * signs[k.second]));
  return out;
}

}  // namespace gblab::frames
