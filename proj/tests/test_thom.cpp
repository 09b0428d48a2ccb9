#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gblab/errors.hpp"
#include "gblab/fixtures.hpp"
#include "gblab/frame.hpp"
#include "gblab/grid.hpp"
#include "gblab/mixed_form.hpp"
#include "gblab/thom.hpp"

using gblab::forms::MixedForm;
using gblab::frames::FrameConnection;
using gblab::grid::GridPtr;
using gblab::grid::Quadrature;
using gblab::thom::SectionField;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

FrameConnection flat_connection(GridPtr g, int rank) {
  FrameConnection conn;
  conn.grid = std::move(g);
  conn.rank = rank;
  return conn;
}

SectionField circle_normal(const GridPtr& g, double scale) {
  SectionField v;
  v.grid = g;
  v.components.push_back(gblab::grid::sample(
      *g, [scale](const double* x) { return scale * std::cos(x[0]); }));
  v.components.push_back(gblab::grid::sample(
      *g, [scale](const double* x) { return scale * std::sin(x[0]); }));
  return v;
}

}  // namespace

TEST_CASE("unit norm residual measures the worst grid point") {
  GridPtr g = gblab::grid::make_grid({{0.0, 2.0 * kPi, 65}});
  CHECK(gblab::thom::unit_norm_residual(circle_normal(g, 1.0)) <= 1e-15);
  CHECK(gblab::thom::unit_norm_residual(circle_normal(g, 2.0)) ==
        doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("curvature operator matches the quadratic curvature element") {
  auto conn = gblab::fixtures::round_sphere(41);
  auto curv = gblab::frames::curvature(conn);
  auto op = gblab::thom::curvature_operator(curv);
  const MixedForm* part = op.part(2, 2);
  REQUIRE(part != nullptr);
  MixedForm expected = gblab::frames::quadratic_curvature_element(curv, 2);
  CHECK(gblab::forms::subtract(*part, expected).max_abs() <= 1e-13);
}

TEST_CASE("gaussian exponent element splits by bidegree") {
  auto conn = gblab::fixtures::round_sphere(41);
  SectionField v;
  v.grid = conn.grid;
  v.components.push_back(gblab::grid::constant(*conn.grid, 1.0));
  v.components.push_back(gblab::grid::constant(*conn.grid, 0.0));

  auto phi = gblab::thom::phi_element(v, conn);

  const MixedForm* scalar = phi.part(0, 0);
  REQUIRE(scalar != nullptr);
  MixedForm minus_one(conn.grid, 2, 0, 0);
  minus_one.add_term(0, 0, gblab::grid::constant(*conn.grid, -1.0));
  CHECK(gblab::forms::subtract(*scalar, minus_one).max_abs() <= 1e-14);

  const MixedForm* grad = phi.part(1, 1);
  REQUIRE(grad != nullptr);
  MixedForm nabla = gblab::thom::covariant_differential(v, conn);
  CHECK(gblab::forms::subtract(*grad, nabla).max_abs() <= 1e-14);

  // for the constant section e_1, nabla V = -omega_12 e_2 with no derivative
  // term, so the comparison against the stored connection form is exact
  MixedForm expected(conn.grid, 2, 1, 1);
  MixedForm m = gblab::forms::scale(conn.omega_at(0, 1), -1.0);
  for (const auto& [key, values] : m.coeff)
    expected.add_term(key.first, 0b10, values);
  CHECK(gblab::forms::subtract(nabla, expected).max_abs() == 0.0);

  const MixedForm* quad = phi.part(2, 2);
  REQUIRE(quad != nullptr);
  auto op = gblab::thom::curvature_operator(gblab::frames::curvature(conn));
  CHECK(gblab::forms::subtract(*quad, *op.part(2, 2)).max_abs() <= 1e-14);
}

TEST_CASE("pulled-back gaussian form on a line matches the analytic profile") {
  const double s = 2.0;
  GridPtr g = gblab::grid::make_grid({{-6.0, 6.0, 201}});
  SectionField v;
  v.grid = g;
  v.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[0]; }));
  auto conn = flat_connection(g, 1);

  MixedForm tau = gblab::thom::thom_pullback(v, conn, s);
  MixedForm expected(g, 1, 1, 0);
  expected.add_term(0b1, 0, gblab::grid::sample(*g, [&](const double* x) {
                      return s / kSqrtPi * std::exp(-s * s * x[0] * x[0]);
                    }));
  CHECK(gblab::forms::subtract(tau, expected).max_abs() <= 1e-12);
  CHECK(gblab::forms::integrate(tau, Quadrature::simpson) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("rotation index localizes to the sign of the interior zero") {
  GridPtr g = gblab::grid::make_grid({{-1.0, 1.0, 121}, {-1.0, 1.0, 121}});
  auto conn = flat_connection(g, 2);
  std::vector<double> schedule = {10.0, 20.0, 40.0};

  SectionField pos;
  pos.grid = g;
  pos.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[0]; }));
  pos.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[1]; }));
  CHECK(gblab::thom::rotation_index_limit(pos, conn, schedule) ==
        doctest::Approx(1.0).epsilon(1e-5));

  SectionField neg;
  neg.grid = g;
  neg.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[0]; }));
  neg.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return -x[1]; }));
  CHECK(gblab::thom::rotation_index_limit(neg, conn, schedule) ==
        doctest::Approx(-1.0).epsilon(1e-5));

  SectionField off;  // |V| minimized on the chart edge: nothing to localize
  off.grid = g;
  off.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[0] - 2.0; }));
  off.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return x[1]; }));
  CHECK_THROWS_AS(gblab::thom::rotation_index_limit(off, conn, schedule),
                  gblab::LocusError);
}

TEST_CASE("boundary form requires a unit section and the matching parity") {
  GridPtr g = gblab::grid::make_grid({{0.0, 2.0 * kPi, 65}});
  auto conn = flat_connection(g, 2);
  CHECK_THROWS_AS(
      gblab::thom::boundary_curvature_moment(circle_normal(g, 2.0), conn),
      gblab::NormError);

  auto v = circle_normal(g, 1.0);
  CHECK_THROWS_AS(gblab::thom::geodesic_curvature_odd(v, conn),
                  gblab::DimensionError);

  auto conn3 = flat_connection(g, 3);
  SectionField v3 = v;
  v3.components.push_back(gblab::grid::constant(*g, 0.0));
  CHECK_THROWS_AS(gblab::thom::geodesic_curvature_even(v3, conn3),
                  gblab::DimensionError);
}

TEST_CASE("flat disk boundary form integrates to the euler characteristic of the disk") {
  GridPtr g = gblab::grid::make_grid({{0.0, 2.0 * kPi, 257}});
  auto conn = flat_connection(g, 2);
  auto v = circle_normal(g, 1.0);
  auto form = gblab::thom::geodesic_curvature_even(v, conn);
  double total = gblab::forms::integrate(form.form, Quadrature::simpson);
  // the finite-difference bias of the coefficient is h^2/6
  double h = g->max_spacing();
  CHECK(std::abs(total - 1.0) <= h * h);
  CHECK(std::abs(total - 1.0) >= h * h / 100.0);  // the bias is real, not luck
}

TEST_CASE("moment series agrees with the explicit ray quadrature") {
  GridPtr g = gblab::grid::make_grid({{0.0, 2.0 * kPi, 129}});
  auto conn = flat_connection(g, 2);
  auto v = circle_normal(g, 1.0);
  MixedForm moment = gblab::thom::boundary_curvature_moment(v, conn);
  MixedForm direct = gblab::thom::boundary_curvature_direct(v, conn, 5.0, 241);
  CHECK(gblab::forms::subtract(moment, direct).max_abs() <= 1e-6);
}

TEST_CASE("odd-rank closed formula reproduces the moment series") {
  GridPtr g = gblab::grid::make_grid({{0.0, kPi, 129}, {0.0, 2.0 * kPi, 129}});
  auto conn = flat_connection(g, 3);
  SectionField v;
  v.grid = g;
  v.components.push_back(gblab::grid::sample(
      *g, [](const double* x) { return std::sin(x[0]) * std::cos(x[1]); }));
  v.components.push_back(gblab::grid::sample(
      *g, [](const double* x) { return std::sin(x[0]) * std::sin(x[1]); }));
  v.components.push_back(
      gblab::grid::sample(*g, [](const double* x) { return std::cos(x[0]); }));

  MixedForm closed = gblab::thom::geodesic_curvature_odd(v, conn).form;
  MixedForm moment = gblab::thom::boundary_curvature_moment(v, conn);
  CHECK(gblab::forms::subtract(closed, moment).max_abs() <= 1e-10);

  double total = gblab::forms::integrate(closed, Quadrature::simpson);
  CHECK(total == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("zero-scale pullback is the euler form") {
  auto conn = gblab::fixtures::round_sphere(101);
  SectionField zero;
  zero.grid = conn.grid;
  zero.components.push_back(gblab::grid::constant(*conn.grid, 0.0));
  zero.components.push_back(gblab::grid::constant(*conn.grid, 0.0));
  MixedForm tau = gblab::thom::thom_pullback(zero, conn, 1.0);
  MixedForm euler = gblab::frames::euler_form(gblab::frames::curvature(conn));
  CHECK(gblab::forms::subtract(tau, euler).max_abs() <= 1e-12);
}

TEST_CASE("transgressed form differentiates to the pulled-back euler form") {
  GridPtr flat = gblab::grid::make_grid({{-1.0, 1.0, 41}, {-1.0, 1.0, 41}});
  CHECK(gblab::thom::transgression_check(flat_connection(flat, 2), 61) <= 1e-12);

  auto sphere = gblab::fixtures::round_sphere(61);
  CHECK(gblab::thom::transgression_check(sphere, 81) <= 1e-12);

  auto ambient = gblab::fixtures::adapted_pair("round_sphere", 33).ambient;
  CHECK_THROWS_AS(gblab::thom::transgression_form(ambient, 33), gblab::FrameError);
}

TEST_CASE("flat gaussian form has unit mass") {
  for (int n : {1, 2}) {
    MixedForm f = gblab::thom::flat_thom_form(n, 6.0, 61);
    CHECK(gblab::forms::integrate(f, Quadrature::trapezoid) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  for (int n : {1, 2, 3}) {
    CHECK(gblab::thom::flat_thom_fiber_integral_streaming(n, 6.0, 61,
                                                          Quadrature::trapezoid) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("fiber integration polices gaussian truncation") {
  MixedForm f = gblab::thom::flat_thom_form(2, 2.0, 21);
  CHECK_THROWS_AS(
      gblab::forms::fiber_integrate(f, 0b10, Quadrature::trapezoid, 1e-8),
      gblab::TruncationError);

  MixedForm partial =
      gblab::forms::fiber_integrate(f, 0b10, Quadrature::trapezoid, 0.1);
  double total = gblab::forms::integrate(partial, Quadrature::trapezoid);
  double erf2 = std::erf(2.0);
  CHECK(total == doctest::Approx(erf2 * erf2).epsilon(5e-3));
}
