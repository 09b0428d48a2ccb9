#include "gblab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gblab/chains.hpp"
#include "gblab/constants.hpp"
#include "gblab/errors.hpp"
#include "gblab/fixtures.hpp"
#include "gblab/flatform.hpp"
#include "gblab/frame.hpp"
#include "gblab/grid.hpp"
#include "gblab/mixed_form.hpp"
#include "gblab/sine_gordon.hpp"
#include "gblab/skew.hpp"
#include "gblab/thom.hpp"

namespace gblab::suites {
namespace {

using report::Check;
using report::make_check;
using report::Report;
using report::RunConfig;

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- pfaffian

std::vector<double> random_skew_entries(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double v = u(rng);
      a[static_cast<std::size_t>(i) * dim + j] = v;
      a[static_cast<std::size_t>(j) * dim + i] = -v;
    }
  return a;
}

Eigen::MatrixXd to_matrix(int dim, const std::vector<double>& a) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = a[static_cast<std::size_t>(i) * dim + j];
  return m;
}

Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Report suite_pfaffian(const RunConfig& cfg) {
  Report rep;
  rep.suite = "pfaffian";
  std::mt19937_64 rng(cfg.seed);

  for (int dim : {2, 4, 6, 8, 10}) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      auto entries = random_skew_entries(dim, rng);
      skew::SkewMatrix a(dim, entries);
      double pf = skew::pfaffian(a);
      double det = to_matrix(dim, entries).determinant();
      worst = std::max(worst,
                       std::abs(pf * pf - det) / std::max(1.0, std::abs(det)));
    }
    rep.checks.push_back(make_check("pf-squared-det-dim-" + std::to_string(dim),
                                    worst, 0.0, 1e-9));
  }

  for (int dim : {2, 4, 6, 8, 10}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      auto entries = random_skew_entries(dim, rng);
      skew::SkewMatrix a(dim, entries);
      double pf = skew::pfaffian(a);
      Eigen::MatrixXd q = random_rotation(dim, rng);
      Eigen::MatrixXd b = q * to_matrix(dim, entries) * q.transpose();
      std::vector<double> conj(static_cast<std::size_t>(dim) * dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          conj[static_cast<std::size_t>(i) * dim + j] = b(i, j);
      double pfc = skew::pfaffian(skew::SkewMatrix(dim, conj));
      worst = std::max(worst, std::abs(pfc - pf) / std::max(1.0, std::abs(pf)));
    }
    rep.checks.push_back(make_check("pf-so-conjugation-dim-" + std::to_string(dim),
                                    worst, 0.0, 1e-8));
  }

  for (int dim : {2, 4, 6}) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      skew::SkewMatrix a(dim, random_skew_entries(dim, rng));
      worst = std::max(worst, std::abs(skew::pfaffian_definition_sum(a) -
                                       skew::pfaffian_recursive(a)));
    }
    rep.checks.push_back(make_check(
        "pf-defsum-vs-recursion-dim-" + std::to_string(dim), worst, 0.0, 1e-10));
  }

  std::vector<double> block(16, 0.0);
  block[0 * 4 + 1] = 2.0;
  block[1 * 4 + 0] = -2.0;
  block[2 * 4 + 3] = 3.0;
  block[3 * 4 + 2] = -3.0;
  rep.checks.push_back(make_check(
      "pf-block-diagonal", skew::pfaffian(skew::SkewMatrix(4, block)), 6.0, 1e-12));
  return rep;
}

// ------------------------------------------------------------------- forms

Report suite_forms(const RunConfig&) {
  Report rep;
  rep.suite = "forms";
  const auto simpson = grid::Quadrature::simpson;

  double s1 = grid::integrate_nd({{0.0, 2.0 * kPi, 201}},
                                 [](const double*) { return 1.0; }, simpson);
  rep.checks.push_back(
      make_check("sphere-volume-s1", s1, constants::sphere_volume(2), 1e-3));

  double s2 = grid::integrate_nd(
      {{0.0, kPi, 201}, {0.0, 2.0 * kPi, 201}},
      [](const double* x) { return std::sin(x[0]); }, simpson);
  rep.checks.push_back(
      make_check("sphere-volume-s2", s2, constants::sphere_volume(3), 1e-3));

  double s3 = grid::integrate_nd(
      {{0.0, kPi, 101}, {0.0, kPi, 101}, {0.0, 2.0 * kPi, 101}},
      [](const double* x) {
        double s = std::sin(x[0]);
        return s * s * std::sin(x[1]);
      },
      simpson);
  rep.checks.push_back(
      make_check("sphere-volume-s3", s3, constants::sphere_volume(4), 1e-3));

  for (int k = 0; k <= 4; ++k) {
    double v = grid::integrate_nd(
        {{-8.0, 8.0, 1601}},
        [k](const double* t) { return std::pow(t[0], 2 * k) * std::exp(-t[0] * t[0]); },
        simpson);
    rep.checks.push_back(make_check("gaussian-moment-" + std::to_string(2 * k), v,
                                    constants::gaussian_even_moment(k), 1e-6));
  }
  for (int j = 0; j <= 5; ++j) {
    double v = grid::integrate_nd(
        {{0.0, 8.0, 1601}},
        [j](const double* t) { return std::pow(t[0], j) * std::exp(-t[0] * t[0]); },
        simpson);
    rep.checks.push_back(make_check("gaussian-half-moment-" + std::to_string(j), v,
                                    constants::gaussian_half_moment(j), 1e-6));
  }

  grid::GridPtr g = grid::make_grid({{0.0, 1.0, 81}, {0.0, 1.0, 81}});
  grid::GridFn f = grid::sample(
      *g, [](const double* x) { return std::sin(3.0 * x[0] + 1.0) * std::cos(2.0 * x[1]); });
  forms::MixedForm f0(g, 0, 0, 0);
  f0.add_term(0, 0, f);
  double ddf = forms::exterior_derivative(forms::exterior_derivative(f0)).max_abs();
  rep.checks.push_back(make_check("d-squared-zero", ddf, 0.0, 1e-9));

  forms::MixedForm alpha(g, 0, 1, 0), beta(g, 0, 1, 0);
  alpha.add_term(0b01, 0, grid::sample(*g, [](const double* x) { return x[0] + 0.3; }));
  alpha.add_term(0b10, 0, grid::sample(*g, [](const double* x) { return std::cos(x[1]); }));
  beta.add_term(0b01, 0, grid::sample(*g, [](const double* x) { return x[1] * x[0]; }));
  beta.add_term(0b10, 0, grid::sample(*g, [](const double* x) { return std::exp(x[0]); }));
  double anti =
      forms::add(forms::wedge(alpha, beta), forms::wedge(beta, alpha)).max_abs();
  rep.checks.push_back(make_check("wedge-anticommute", anti, 0.0, 0.0));
  return rep;
}

// ------------------------------------------------------------------ frames

Report suite_frames(const RunConfig&) {
  Report rep;
  rep.suite = "frames";
  const auto simpson = grid::Quadrature::simpson;

  {
    auto conn = fixtures::closed_surface("round_sphere", 201);
    double chi = forms::integrate(frames::euler_form(frames::curvature(conn)), simpson);
    rep.checks.push_back(make_check("gauss-bonnet-sphere", chi, 2.0, 1e-3));
  }
  {
    auto conn = fixtures::closed_surface("round_sphere_radius2", 201);
    double chi = forms::integrate(frames::euler_form(frames::curvature(conn)), simpson);
    rep.checks.push_back(make_check("gauss-bonnet-sphere-radius2", chi, 2.0, 1e-3));
  }
  {
    auto conn = fixtures::closed_surface("flat_torus", 101);
    double chi = forms::integrate(frames::euler_form(frames::curvature(conn)), simpson);
    rep.checks.push_back(make_check("gauss-bonnet-torus", chi, 0.0, 1e-10));
  }

  {
    auto conn = fixtures::hyperbolic_half_plane(141);
    double h = conn.grid->max_spacing();
    rep.checks.push_back(make_check("hyperbolic-constant-curvature",
                                    frames::constant_curvature_residual(conn, -1.0),
                                    0.0, 40.0 * h * h));
    rep.checks.push_back(make_check("hyperbolic-first-structure",
                                    frames::first_structure_residual(conn), 0.0,
                                    40.0 * h * h));
  }
  {
    auto conn = fixtures::round_sphere(201);
    double h = conn.grid->max_spacing();
    rep.checks.push_back(make_check("sphere-constant-curvature",
                                    frames::constant_curvature_residual(conn, 1.0),
                                    0.0, 10.0 * h * h));
    rep.checks.push_back(make_check("sphere-first-structure",
                                    frames::first_structure_residual(conn), 0.0,
                                    10.0 * h * h));
  }
  {
    auto conn = fixtures::round_sphere(201, 2.0);
    double h = conn.grid->max_spacing();
    rep.checks.push_back(make_check("sphere-radius2-constant-curvature",
                                    frames::constant_curvature_residual(conn, 0.25),
                                    0.0, 10.0 * h * h));
  }

  for (const char* name : {"cylinder", "round_sphere", "flat_plane"}) {
    auto pair = fixtures::adapted_pair(name, 201);
    double h = pair.ambient.grid->max_spacing();
    double tol = std::max(1e-12, 10.0 * h * h);
    rep.checks.push_back(
        make_check(std::string("gauss-equation-") + name,
                   frames::gauss_equation_residual(pair.ambient, pair.boundary), 0.0,
                   tol));
  }

  {
    auto sol = sg::one_soliton(1.0, -2.5, {0.0, 1.0, 0.0, 1.0}, 129);
    auto data = fixtures::pseudosphere_principal(sol);
    auto conn = fixtures::pseudosphere(sol);
    auto res = frames::principal_frame_residuals(data, conn);
    double h = sol.grid->max_spacing();
    double tol = 20.0 * h * h;
    rep.checks.push_back(make_check("principal-connection", res.connection, 0.0, tol));
    rep.checks.push_back(make_check("principal-normal-form", res.normal_form, 0.0, tol));
    rep.checks.push_back(make_check("principal-closedness", res.closedness, 0.0, tol));
    rep.checks.push_back(make_check("principal-coordinate", res.coordinate, 0.0, tol));
    rep.checks.push_back(make_check("principal-unit-norm", res.unit_norm, 0.0, 1e-14));
  }

  {
    auto conn = fixtures::round_sphere(101);
    auto flipped = frames::apply_group_action(conn, {1, -1});
    auto e = frames::euler_form(frames::curvature(conn));
    auto ef = frames::euler_form(frames::curvature(flipped));
    rep.checks.push_back(
        make_check("group-action-euler-sign", forms::add(ef, e).max_abs(), 0.0, 0.0));
  }
  return rep;
}

// -------------------------------------------------------------------- thom

// max |a_(full,0) - s * b_(full,0)| for top-degree forms that may live in
// fiber algebras of different ranks.
double top_coeff_diff(const forms::MixedForm& a, const forms::MixedForm& b, double s) {
  const forms::Mask full = (forms::Mask{1} << a.grid->dim()) - 1;
  const grid::GridFn* fa = a.find(full, 0);
  const grid::GridFn* fb = b.find(full, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.grid->size(); ++i) {
    double va = fa ? (*fa)[i] : 0.0;
    double vb = fb ? (*fb)[i] : 0.0;
    worst = std::max(worst, std::abs(va - s * vb));
  }
  return worst;
}

Report suite_thom(const RunConfig&) {
  Report rep;
  rep.suite = "thom";
  const auto simpson = grid::Quadrature::simpson;

  for (int n = 1; n <= 4; ++n) {
    double v = thom::flat_thom_fiber_integral_streaming(n, 6.0, 121, simpson);
    rep.checks.push_back(
        make_check("flat-thom-n" + std::to_string(n), v, 1.0, 1e-8));
  }
  for (int n : {2, 3}) {
    double v = forms::integrate(thom::flat_thom_form(n, 6.0, 61),
                                grid::Quadrature::trapezoid);
    rep.checks.push_back(
        make_check("flat-thom-machinery-n" + std::to_string(n), v, 1.0, 1e-8));
  }

  {
    grid::GridPtr g = grid::make_grid({{-1.0, 1.0, 241}, {-1.0, 1.0, 241}});
    frames::FrameConnection flat;
    flat.grid = g;
    flat.rank = 2;
    thom::SectionField plus{g, {grid::sample(*g, [](const double* x) { return x[0]; }),
                                grid::sample(*g, [](const double* x) { return x[1]; })}};
    thom::SectionField minus{g, {grid::sample(*g, [](const double* x) { return x[0]; }),
                                 grid::sample(*g, [](const double* x) { return -x[1]; })}};
    std::vector<double> schedule{10.0, 20.0, 40.0};
    rep.checks.push_back(make_check(
        "rotation-index-positive",
        thom::rotation_index_limit(plus, flat, schedule), 1.0, 1e-5));
    rep.checks.push_back(make_check(
        "rotation-index-negative",
        thom::rotation_index_limit(minus, flat, schedule), -1.0, 1e-5));
  }

  {
    // The coefficient carries a finite-difference bias of h^2/6, so hitting
    // 1e-6 on the integral needs a fine circle; the chart is 1-d, so this
    // stays cheap.
    grid::GridPtr circle = grid::make_grid({{0.0, 2.0 * kPi, 6145}});
    frames::FrameConnection flat;
    flat.grid = circle;
    flat.rank = 2;
    thom::SectionField v{circle,
                         {grid::sample(*circle, [](const double* x) { return std::cos(x[0]); }),
                          grid::sample(*circle, [](const double* x) { return std::sin(x[0]); })}};
    thom::SectionField vneg{circle,
                            {grid::sample(*circle, [](const double* x) { return -std::cos(x[0]); }),
                             grid::sample(*circle, [](const double* x) { return -std::sin(x[0]); })}};
    auto pi_form = thom::geodesic_curvature_even(v, flat).form;
    rep.checks.push_back(
        make_check("boundary-gb-disk", forms::integrate(pi_form, simpson), 1.0, 1e-6));
    auto pi_neg = thom::geodesic_curvature_even(vneg, flat).form;
    rep.checks.push_back(make_check("boundary-parity-even",
                                    forms::subtract(pi_form, pi_neg).max_abs(), 0.0,
                                    0.0));
  }

  {
    grid::GridPtr circle = grid::make_grid({{0.0, 2.0 * kPi, 257}});
    frames::FrameConnection flat;
    flat.grid = circle;
    flat.rank = 2;
    thom::SectionField v{circle,
                         {grid::sample(*circle, [](const double* x) { return std::cos(x[0]); }),
                          grid::sample(*circle, [](const double* x) { return std::sin(x[0]); })}};
    auto pi_form = thom::geodesic_curvature_even(v, flat).form;
    auto direct = thom::boundary_curvature_direct(v, flat, 6.0, 1201);
    rep.checks.push_back(make_check("boundary-moment-vs-direct",
                                    forms::subtract(pi_form, direct).max_abs(), 0.0,
                                    1e-8));
  }

  {
    grid::GridPtr g = grid::make_grid({{0.0, kPi, 513}, {0.0, 2.0 * kPi, 513}});
    frames::FrameConnection flat;
    flat.grid = g;
    flat.rank = 3;
    auto vr = [](const double* x) { return std::sin(x[0]) * std::cos(x[1]); };
    auto vs = [](const double* x) { return std::sin(x[0]) * std::sin(x[1]); };
    auto vc = [](const double* x) { return std::cos(x[0]); };
    thom::SectionField v{g, {grid::sample(*g, vr), grid::sample(*g, vs),
                             grid::sample(*g, vc)}};
    thom::SectionField vneg{
        g, {grid::sample(*g, [&](const double* x) { return -vr(x); }),
            grid::sample(*g, [&](const double* x) { return -vs(x); }),
            grid::sample(*g, [&](const double* x) { return -vc(x); })}};
    auto pi_form = thom::geodesic_curvature_odd(v, flat).form;
    rep.checks.push_back(
        make_check("boundary-gb-ball", forms::integrate(pi_form, simpson), 1.0, 1e-4));
    auto pi_neg = thom::geodesic_curvature_odd(vneg, flat).form;
    rep.checks.push_back(make_check("boundary-parity-odd",
                                    forms::add(pi_form, pi_neg).max_abs(), 0.0, 0.0));

    // Induced round connection on the same chart; the boundary form must be
    // half its Euler form.
    forms::MixedForm theta1(g, 2, 1, 0), theta2(g, 2, 1, 0), omega(g, 2, 1, 0);
    theta1.add_term(0b01, 0, grid::constant(*g, 1.0));
    theta2.add_term(0b10, 0, grid::sample(*g, [](const double* x) { return std::sin(x[0]); }));
    omega.add_term(0b10, 0, grid::sample(*g, [](const double* x) { return -std::cos(x[0]); }));
    frames::FrameConnection bconn;
    bconn.grid = g;
    bconn.rank = 2;
    bconn.theta = {theta1, theta2};
    bconn.omega[{0, 1}] = omega;
    auto e = frames::euler_form(frames::curvature(bconn));
    double h = g->max_spacing();
    rep.checks.push_back(make_check("ball-half-boundary-euler",
                                    top_coeff_diff(pi_form, e, 0.5), 0.0,
                                    10.0 * h * h));
  }

  {
    auto conn = fixtures::round_sphere(101);
    thom::SectionField zero{conn.grid,
                            {grid::constant(*conn.grid, 0.0), grid::constant(*conn.grid, 0.0)}};
    auto tau0 = thom::thom_pullback(zero, conn, 1.0);
    auto e = frames::euler_form(frames::curvature(conn));
    rep.checks.push_back(make_check("tau-zero-euler",
                                    forms::subtract(tau0, e).max_abs(), 0.0, 1e-12));
  }

  {
    grid::GridPtr g = grid::make_grid({{-1.0, 1.0, 61}, {-1.0, 1.0, 61}});
    frames::FrameConnection flat;
    flat.grid = g;
    flat.rank = 2;
    rep.checks.push_back(
        make_check("transgression-flat", thom::transgression_check(flat, 121), 0.0, 1e-8));
    auto sphere = fixtures::round_sphere(91);
    rep.checks.push_back(make_check("transgression-sphere",
                                    thom::transgression_check(sphere, 121), 0.0, 1e-8));
  }
  return rep;
}

// ----------------------------------------------------------------- complex

long long chain_max_abs(const chains::Chain& c) {
  long long worst = 0;
  for (const auto& [cell, coeff] : c) worst = std::max(worst, std::llabs(coeff));
  return worst;
}

long long double_chain_max_abs(const chains::DoubleChain& c) {
  long long worst = 0;
  for (const auto& [cell, coeff] : c) worst = std::max(worst, std::llabs(coeff));
  return worst;
}

// All nonempty axis subsets with all flip assignments.
template <typename F>
void for_each_cell(int n, F&& f) {
  for (chains::Mask members = 1; members < (chains::Mask{1} << n); ++members) {
    chains::Mask flips = 0;
    do {
      f(chains::Cell{members, flips});
      flips = (flips - members) & members;
    } while (flips != 0);
  }
}

std::vector<std::vector<double>> identity_coframe(int n) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

std::vector<std::vector<double>> random_coframe(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = scale(rng);
  Eigen::MatrixXd m = random_rotation(n, rng) * d * random_rotation(n, rng);
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = m(i, j);
  return out;
}

Report suite_complex(const RunConfig& cfg) {
  Report rep;
  rep.suite = "complex";
  rep.config["samples"] = std::to_string(cfg.samples);

  long long worst_simplex = 0, worst_cube = 0;
  for (int n = 2; n <= 6; ++n) {
    for_each_cell(n, [&](const chains::Cell& cell) {
      chains::Chain c{{cell, 1}};
      worst_simplex = std::max(
          worst_simplex,
          chain_max_abs(chains::boundary_simplex(chains::boundary_simplex(c, n), n)));
      worst_cube = std::max(
          worst_cube,
          chain_max_abs(chains::boundary_cube(chains::boundary_cube(c, n), n)));
    });
  }
  rep.checks.push_back(make_check("simplex-boundary-squared",
                                  static_cast<double>(worst_simplex), 0.0, 0.0));
  rep.checks.push_back(
      make_check("cube-boundary-squared", static_cast<double>(worst_cube), 0.0, 0.0));

  long long worst_adjoint = 0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<chains::Cell> cells;
    for_each_cell(n, [&](const chains::Cell& cell) { cells.push_back(cell); });
    for (const chains::Cell& x : cells) {
      chains::Chain cx{{x, 1}};
      chains::Chain bx = chains::boundary_cube(cx, n);
      for (const chains::Cell& y : cells) {
        chains::Chain cy{{y, 1}};
        long long lhs = chains::duality_pairing(bx, cy);
        long long rhs = chains::duality_pairing(cx, chains::boundary_simplex(cy, n));
        worst_adjoint = std::max(worst_adjoint, std::llabs(lhs - rhs));
      }
    }
  }
  rep.checks.push_back(make_check("boundary-adjointness",
                                  static_cast<double>(worst_adjoint), 0.0, 0.0));

  long long worst_cycle = 0, worst_twisted = 0, worst_layer = 0;
  for (int n = 2; n <= 6; ++n) {
    chains::DoubleChain z = chains::fundamental_cycle(n);
    worst_cycle =
        std::max(worst_cycle, double_chain_max_abs(chains::boundary_double(z, n)));
    for (chains::Mask h = 0; h < (chains::Mask{1} << n); ++h) {
      chains::DoubleChain tz = chains::twisted_action(chains::GroupElement{n, h}, z);
      worst_twisted =
          std::max(worst_twisted, double_chain_max_abs(chains::boundary_double(tz, n)));
    }
    chains::Chain layer = chains::vertex_layer_cubes(z);
    chains::accumulate(layer, chains::vertex_layer_reference(n), -1);
    chains::remove_zeros(layer);
    worst_layer = std::max(worst_layer, chain_max_abs(layer));
  }
  rep.checks.push_back(make_check("fundamental-cycle-closed",
                                  static_cast<double>(worst_cycle), 0.0, 0.0));
  rep.checks.push_back(make_check("twisted-cycle-closed",
                                  static_cast<double>(worst_twisted), 0.0, 0.0));
  rep.checks.push_back(
      make_check("vertex-layer-reference", static_cast<double>(worst_layer), 0.0, 0.0));

  long long worst_proper = 0, worst_full = 0;
  for (int n = 2; n <= 8; ++n) {
    for (chains::Mask subset = 1; subset < (chains::Mask{1} << n); ++subset) {
      long long s = chains::character_sum(subset, n);
      if (subset == (chains::Mask{1} << n) - 1)
        worst_full = std::max(worst_full, std::llabs(s - (1LL << n)));
      else
        worst_proper = std::max(worst_proper, std::llabs(s));
    }
  }
  rep.checks.push_back(make_check("character-sum-proper-subsets",
                                  static_cast<double>(worst_proper), 0.0, 0.0));
  rep.checks.push_back(make_check("character-sum-full-subset",
                                  static_cast<double>(worst_full), 0.0, 0.0));

  int mismatches = 0;
  for (int n = 2; n <= 6; ++n) {
    chains::HomologyResult hr = chains::cube_homology(n);
    std::vector<long long> expect(n, 0);
    expect[0] = 1;
    expect[n - 1] += 1;  // n = 2 folds both generators into (1, 1)
    if (hr.betti != expect) ++mismatches;
    for (const auto& factors : hr.torsion)
      if (!factors.empty()) ++mismatches;
  }
  rep.checks.push_back(
      make_check("cube-homology-spheres", static_cast<double>(mismatches), 0.0, 0.0));

  {
    chains::HomologyResult hr = chains::simplex_homology(3);
    int bad = hr.betti == std::vector<long long>{1, 0, 1} ? 0 : 1;
    for (const auto& factors : hr.torsion)
      if (!factors.empty()) ++bad;
    rep.checks.push_back(
        make_check("simplex-homology-boundary", static_cast<double>(bad), 0.0, 0.0));
  }

  chains::SolidAngleOptions opt;
  opt.seed = cfg.seed;
  opt.samples = static_cast<std::size_t>(cfg.samples);
  std::mt19937_64 rng(cfg.seed ^ 0x51D0C0FFEEULL);
  for (int n : {2, 3, 4}) {
    auto fr = chains::solid_angle_fractions(identity_coframe(n), opt);
    double worst = 0.0;
    for (double f : fr) worst = std::max(worst, std::abs(f - 1.0 / (2.0 * n)));
    rep.checks.push_back(make_check("solid-angle-euclidean-n" + std::to_string(n),
                                    worst, 0.0, 2e-3));

    double worst_sum = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      auto fr2 = chains::solid_angle_fractions(random_coframe(n, rng), opt);
      double sum = 0.0;
      for (double f : fr2) sum += f;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    rep.checks.push_back(
        make_check("solid-angle-sum-n" + std::to_string(n), worst_sum, 0.0, 4e-3));
  }

  double worst_rhs = 0.0;
  for (int n = 2; n <= 8; ++n) {
    std::vector<double> fractions(2 * n, 1.0 / (2.0 * n));
    worst_rhs = std::max(worst_rhs, std::abs(chains::hazzidakis_rhs(fractions)));
  }
  rep.checks.push_back(make_check("hazzidakis-rhs-euclidean", worst_rhs, 0.0, 0.0));
  return rep;
}

// ---------------------------------------------------------------- flatform

Report suite_flatform(const RunConfig& cfg) {
  Report rep;
  rep.suite = "flatform";

  double worst_sym = 0.0, worst_comm = 0.0, worst_basis = 0.0, worst_mix = 0.0,
         worst_recon = 0.0;
  for (int n = 2; n <= 8; ++n) {
    double min_cos = 2.0;
    for (int i = 0; i < 100; ++i) {
      std::uint64_t seed =
          cfg.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n * 1000 + i + 1));
      auto inst = flatform::random_planted_instance(n, seed);
      flatform::DiagonalizeOptions opt;
      opt.seed = seed ^ 0x517CC1B727220A95ULL;
      auto d = flatform::diagonalize(inst.beta, opt);
      min_cos = std::min(min_cos,
                         flatform::direction_match_min_cos(d.basis, inst.directions));
      worst_sym = std::max(worst_sym, d.symmetry_residual);
      worst_comm = std::max(worst_comm, d.commutation_residual);
      worst_basis = std::max(worst_basis, d.basis_orthonormality);
      worst_mix = std::max(worst_mix, d.a_orthogonality);
      worst_recon = std::max(worst_recon, d.reconstruction_residual);
    }
    rep.checks.push_back(make_check("flatform-direction-recovery-n" + std::to_string(n),
                                    min_cos, 1.0, 1e-8));
  }
  rep.checks.push_back(make_check("flatform-symmetry-residual", worst_sym, 0.0, 1e-7));
  rep.checks.push_back(
      make_check("flatform-commutation-residual", worst_comm, 0.0, 1e-7));
  rep.checks.push_back(
      make_check("flatform-basis-orthonormality", worst_basis, 0.0, 1e-8));
  rep.checks.push_back(make_check("flatform-mixing-orthogonality", worst_mix, 0.0, 1e-8));
  rep.checks.push_back(make_check("flatform-reconstruction", worst_recon, 0.0, 1e-7));

  int missed = 0;
  for (int n = 2; n <= 8; ++n) {
    for (int i = 0; i < 3; ++i) {
      std::uint64_t seed =
          cfg.seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(n * 100 + i + 1));
      auto beta = flatform::degenerate_instance(n, seed);
      try {
        flatform::diagonalize(beta);
        ++missed;
      } catch (const KernelError&) {
      }
    }
  }
  rep.checks.push_back(
      make_check("flatform-kernel-detection-misses", static_cast<double>(missed), 0.0, 0.0));
  return rep;
}

// -------------------------------------------------------------- hazzidakis

double admissible_offset(double mu, const sg::Rect& r) {
  // Puts the largest exponent at -0.5, keeping theta strictly inside (0, pi).
  double top = std::max(mu * r.a, mu * r.b) + std::max(r.c / mu, r.d / mu);
  return -top - 0.5;
}

Report suite_hazzidakis(const RunConfig& cfg) {
  Report rep;
  rep.suite = "hazzidakis";
  int res = cfg.resolution_for("hazzidakis", 513);
  rep.config["resolution"] = std::to_string(res);
  sg::Rect unit{0.0, 1.0, 0.0, 1.0};

  for (double mu : {0.5, 1.0, 2.0}) {
    auto sol = sg::one_soliton(mu, admissible_offset(mu, unit), unit, res);
    double gap = std::abs(sg::hyperbolic_area(sol) - sg::hazzidakis_corner_sum(sol));
    rep.checks.push_back(
        make_check("hazzidakis-area-corner-mu" + fmt(mu), gap, 0.0, 1e-6));
  }

  {
    auto rows =
        sg::convergence_table(1.0, admissible_offset(1.0, unit), unit, {65, 129, 257, 513});
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rows) {
      double x = std::log(1.0 / (row.res - 1));
      double y = std::log(row.residual);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double m = rows.size();
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.checks.push_back(make_check("hazzidakis-convergence-order", slope, 2.0, 0.4));
  }

  {
    double worst_violation = 0.0;
    const std::vector<std::pair<double, sg::Rect>> family = {
        {1.0, {0.0, 1.0, 0.0, 1.0}},  {1.0, {0.0, 2.0, 0.0, 1.0}},
        {2.0, {0.0, 3.0, 0.0, 2.0}},  {0.5, {0.5, 1.5, 0.0, 1.0}},
        {1.5, {0.0, 2.0, 0.0, 2.0}}};
    for (const auto& [mu, rect] : family) {
      auto sol = sg::one_soliton(mu, admissible_offset(mu, rect), rect, 129);
      sg::check_admissible(sol);
      double corner = sg::hazzidakis_corner_sum(sol);
      worst_violation = std::max(worst_violation, std::max(0.0, corner - 2.0 * kPi));
    }
    rep.checks.push_back(
        make_check("hazzidakis-corner-below-2pi", worst_violation, 0.0, 0.0));
  }

  {
    auto sol = sg::one_soliton(1.0, admissible_offset(1.0, unit), unit, res);
    double h = sol.grid->max_spacing();
    rep.checks.push_back(make_check("sine-gordon-residual",
                                    sg::sine_gordon_residual(sol), 0.0, 100.0 * h * h));
    auto conn = fixtures::pseudosphere(sol);
    rep.checks.push_back(make_check("pseudosphere-curvature",
                                    frames::constant_curvature_residual(conn, -1.0),
                                    0.0, 50.0 * h * h));
    rep.checks.push_back(make_check("pseudosphere-structure",
                                    frames::first_structure_residual(conn), 0.0,
                                    50.0 * h * h));
  }
  return rep;
}

using SuiteFn = Report (*)(const RunConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"pfaffian", suite_pfaffian}, {"forms", suite_forms},
      {"frames", suite_frames},     {"thom", suite_thom},
      {"complex", suite_complex},   {"flatform", suite_flatform},
      {"hazzidakis", suite_hazzidakis}};
  return table;
}

Report timed(SuiteFn fn, const RunConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  Report rep = fn(cfg);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.config.emplace("seed", std::to_string(cfg.seed));
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

report::Report run_suite(const std::string& name, const report::RunConfig& cfg) {
  for (const auto& [n, fn] : registry())
    if (n == name) return timed(fn, cfg);
  throw ConfigError("unknown suite '" + name + "'");
}

std::vector<report::Report> run_all(const report::RunConfig& cfg) {
  const auto& table = registry();
  std::vector<report::Report> out(table.size());
  int jobs = std::max(1, cfg.jobs);
  std::size_t next = 0;
  while (next < table.size()) {
    std::size_t batch = std::min<std::size_t>(jobs, table.size() - next);
    std::vector<std::future<report::Report>> running;
    running.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k)
      running.push_back(std::async(std::launch::async, timed, table[next + k].second,
                                   std::cref(cfg)));
    for (std::size_t k = 0; k < batch; ++k) out[next + k] = running[k].get();
    next += batch;
  }
  return out;
}

}  // namespace gblab::suites
