#include "gblab/sine_gordon.hpp"

#include <cmath>
#include <numbers>

#include "gblab/errors.hpp"

namespace gblab::sg {

SineGordonSolution one_soliton(double mu, double offset, const Rect& r, int res) {
  if (mu == 0.0) throw DomainError("soliton parameter must be nonzero");
  SineGordonSolution sol;
  sol.rect = r;
  sol.grid = grid::make_grid({{r.a, r.b, res}, {r.c, r.d, res}});
  sol.theta = grid::sample(*sol.grid, [&](const double* y) {
    return 4.0 * std::atan(std::exp(mu * y[0] + y[1] / mu + offset));
  });
  return sol;
}

void check_admissible(const SineGordonSolution& sol, double delta) {
  for (double t : sol.theta)
    if (!(t > delta && t < std::numbers::pi - delta))
      throw DomainError("net angle leaves the admissible band (0, pi)");
}

double sine_gordon_residual(const SineGordonSolution& sol) {
  for (const auto& ax : sol.grid->axes)
    if (ax.res < 33) throw GridError("residual check needs at least 33 samples per axis");
  check_admissible(sol);
  GridFn theta_zw = grid::derivative(*sol.grid, grid::derivative(*sol.grid, sol.theta, 0), 1);
  double r = 0.0;
  for (std::size_t i = 0; i < sol.theta.size(); ++i)
    r = std::max(r, std::abs(theta_zw[i] - std::sin(sol.theta[i])));
  return r;
}

double hyperbolic_area(const SineGordonSolution& sol, Quadrature q) {
  GridFn s(sol.theta.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(sol.theta[i]);
  return grid::integrate(*sol.grid, s, q);
}

double hazzidakis_corner_sum(const SineGordonSolution& sol) {
  const int nz = sol.grid->axes[0].res, nw = sol.grid->axes[1].res;
  auto at = [&](int iz, int iw) {
    const int idx[2] = {iz, iw};
    return sol.theta[sol.grid->ravel(idx)];
  };
  return at(nz - 1, nw - 1) - at(nz - 1, 0) - at(0, nw - 1) + at(0, 0);
}

std::vector<ConvergenceRow> convergence_table(double mu, double offset, const Rect& r,
                                              const std::vector<int>& resolutions) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(resolutions.size());
  for (int res : resolutions) {
    SineGordonSolution sol = one_soliton(mu, offset, r, res);
    check_admissible(sol);
    ConvergenceRow row;
    row.res = res;
    row.area = hyperbolic_area(sol);
    row.corner_sum = hazzidakis_corner_sum(sol);
    row.residual = std::abs(row.area - row.corner_sum);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gblab::sg
