#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "gblab/errors.hpp"
#include "gblab/fixtures.hpp"
#include "gblab/frame.hpp"
#include "gblab/grid.hpp"
#include "gblab/sine_gordon.hpp"

using gblab::frames::FrameConnection;
using gblab::forms::MixedForm;
using gblab::grid::GridFn;
using gblab::grid::GridPtr;
using gblab::grid::Quadrature;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("signed connection accessor") {
  auto conn = gblab::fixtures::round_sphere(31);
  MixedForm upper = conn.omega_at(0, 1);
  MixedForm lower = conn.omega_at(1, 0);
  CHECK(gblab::forms::add(upper, lower).max_abs() == 0.0);
  CHECK(conn.omega_at(1, 1).max_abs() == 0.0);
}

TEST_CASE("fixtures satisfy their structure equations") {
  struct Row {
    FrameConnection conn;
    double k;
  };
  std::vector<Row> rows;
  rows.push_back({gblab::fixtures::hyperbolic_half_plane(121), -1.0});
  rows.push_back({gblab::fixtures::round_sphere(121), 1.0});
  rows.push_back({gblab::fixtures::round_sphere(121, 2.0), 0.25});
  rows.push_back({gblab::fixtures::flat_torus(61), 0.0});
  for (const Row& row : rows) {
    double h = row.conn.grid->max_spacing();
    CHECK(gblab::frames::first_structure_residual(row.conn) <= 40.0 * h * h);
    CHECK(gblab::frames::constant_curvature_residual(row.conn, row.k) <= 40.0 * h * h);
  }
}

TEST_CASE("euler characteristic by curvature integration") {
  auto sphere = gblab::fixtures::closed_surface("round_sphere", 201);
  double chi =
      gblab::forms::integrate(gblab::frames::euler_form(gblab::frames::curvature(sphere)),
                              Quadrature::simpson);
  CHECK(chi == doctest::Approx(2.0).epsilon(1e-3));

  auto torus = gblab::fixtures::closed_surface("flat_torus", 101);
  double chi0 =
      gblab::forms::integrate(gblab::frames::euler_form(gblab::frames::curvature(torus)),
                              Quadrature::simpson);
  CHECK(std::abs(chi0) <= 1e-10);

  CHECK_THROWS_AS(gblab::fixtures::closed_surface("klein_bottle", 33),
                  gblab::FixtureError);
}

TEST_CASE("odd-rank euler form vanishes identically") {
  auto pair = gblab::fixtures::adapted_pair("round_sphere", 61);
  auto curv = gblab::frames::curvature(pair.ambient);
  CHECK(curv.rank == 3);
  CHECK(gblab::frames::euler_form(curv).max_abs() == 0.0);
}

TEST_CASE("second bianchi identity on a three dimensional chart") {
  GridPtr g = gblab::grid::make_grid(
      {{0.0, 1.0, 33}, {0.0, 1.0, 33}, {0.0, 1.0, 33}});
  MixedForm om(g, 2, 1, 0);
  om.add_term(0b001, 0, gblab::grid::sample(*g, [](const double* x) {
                return std::sin(x[0] + 2.0 * x[1]);
              }));
  om.add_term(0b010, 0, gblab::grid::sample(*g, [](const double* x) {
                return x[2] * x[0];
              }));
  om.add_term(0b100, 0, gblab::grid::sample(*g, [](const double* x) {
                return std::cos(x[1] - x[2]);
              }));
  FrameConnection conn;
  conn.grid = g;
  conn.rank = 2;
  conn.omega[{0, 1}] = om;
  CHECK(gblab::frames::bianchi_residual(conn) <= 1e-9);
}

TEST_CASE("hypersurface curvature identity") {
  for (const char* name : {"cylinder", "round_sphere", "flat_plane"}) {
    auto pair = gblab::fixtures::adapted_pair(name, 141);
    double h = pair.ambient.grid->max_spacing();
    CHECK(gblab::frames::gauss_equation_residual(pair.ambient, pair.boundary) <=
          std::max(1e-12, 10.0 * h * h));
  }
  CHECK_THROWS_AS(gblab::fixtures::adapted_pair("moebius", 33), gblab::FixtureError);

  // ambient data without a coframe cannot be checked
  auto pair = gblab::fixtures::adapted_pair("cylinder", 33);
  FrameConnection stripped = pair.ambient;
  stripped.theta.clear();
  CHECK_THROWS_AS(gblab::frames::gauss_equation_residual(stripped, pair.boundary),
                  gblab::FrameError);

  // a normal coframe component that does not vanish is refused
  FrameConnection skewed = pair.ambient;
  MixedForm bad(skewed.grid, skewed.rank, 1, 0);
  bad.add_term(0b01, 0, gblab::grid::constant(*skewed.grid, 0.1));
  skewed.theta.back() = bad;
  CHECK_THROWS_AS(gblab::frames::gauss_equation_residual(skewed, pair.boundary),
                  gblab::FrameError);
}

TEST_CASE("coordinate sign flips conjugate the connection") {
  auto conn = gblab::fixtures::round_sphere(81);
  auto e = gblab::frames::euler_form(gblab::frames::curvature(conn));

  auto odd = gblab::frames::apply_group_action(conn, {1, -1});
  auto e_odd = gblab::frames::euler_form(gblab::frames::curvature(odd));
  CHECK(gblab::forms::add(e_odd, e).max_abs() == 0.0);  // orientation reversed

  auto even = gblab::frames::apply_group_action(conn, {-1, -1});
  auto e_even = gblab::frames::euler_form(gblab::frames::curvature(even));
  CHECK(gblab::forms::subtract(e_even, e).max_abs() == 0.0);

  // theta transforms componentwise
  CHECK(gblab::forms::add(odd.theta[1], conn.theta[1]).max_abs() == 0.0);
  CHECK(gblab::forms::subtract(odd.theta[0], conn.theta[0]).max_abs() == 0.0);

  CHECK_THROWS_AS(gblab::frames::apply_group_action(conn, {1}), gblab::DimensionError);
  CHECK_THROWS_AS(gblab::frames::apply_group_action(conn, {1, 2}), gblab::DomainError);
}

TEST_CASE("principal frame identities on the net-angle chart") {
  auto sol = gblab::sg::one_soliton(1.0, -2.5, {0.0, 1.0, 0.0, 1.0}, 129);
  auto data = gblab::fixtures::pseudosphere_principal(sol);
  auto conn = gblab::fixtures::pseudosphere(sol);
  auto res = gblab::frames::principal_frame_residuals(data, conn);
  double h = sol.grid->max_spacing();
  CHECK(res.connection <= 20.0 * h * h);
  CHECK(res.normal_form <= 20.0 * h * h);
  CHECK(res.closedness <= 20.0 * h * h);
  CHECK(res.coordinate <= 20.0 * h * h);
  CHECK(res.unit_norm <= 1e-14);

  auto broken = data;
  broken.frame_vectors.pop_back();
  CHECK_THROWS_AS(gblab::frames::principal_frame_residuals(broken, conn),
                  gblab::DimensionError);
}

TEST_CASE("frame construction from json") {
  const int res = 41;
  GridPtr g = gblab::grid::make_grid({{0.0, kPi, res}, {0.0, 2.0 * kPi, res}});
  GridFn sin_rho = gblab::grid::sample(*g, [](const double* x) { return std::sin(x[0]); });
  GridFn neg_cos = gblab::grid::sample(*g, [](const double* x) { return -std::cos(x[0]); });

  nlohmann::json doc;
  doc["axes"] = {{{"lo", 0.0}, {"hi", kPi}, {"res", res}},
                 {{"lo", 0.0}, {"hi", 2.0 * kPi}, {"res", res}}};
  doc["rank"] = 2;
  doc["theta"] = {nlohmann::json::array({{{"base", {0}}, {"constant", 1.0}}}),
                  nlohmann::json::array({{{"base", {1}}, {"values", sin_rho}}})};
  doc["omega"] = {{{"i", 0}, {"j", 1}, {"terms", {{{"base", {1}}, {"values", neg_cos}}}}}};

  auto conn = gblab::fixtures::frame_from_json(doc);
  double h = conn.grid->max_spacing();
  CHECK(gblab::frames::first_structure_residual(conn) <= 40.0 * h * h);
  CHECK(gblab::frames::constant_curvature_residual(conn, 1.0) <= 40.0 * h * h);

  // mirrored index order stores the negated form
  nlohmann::json mirrored = doc;
  mirrored["omega"] = {{{"i", 1}, {"j", 0}, {"terms", {{{"base", {1}}, {"values", neg_cos}}}}}};
  auto conn2 = gblab::fixtures::frame_from_json(mirrored);
  CHECK(gblab::forms::add(conn2.omega_at(0, 1), conn.omega_at(0, 1)).max_abs() == 0.0);

  SUBCASE("schema violations") {
    nlohmann::json bad = doc;
    bad.erase("axes");
    CHECK_THROWS_AS(gblab::fixtures::frame_from_json(bad), gblab::ConfigError);

    bad = doc;
    bad.erase("rank");
    CHECK_THROWS_AS(gblab::fixtures::frame_from_json(bad), gblab::ConfigError);

    bad = doc;
    bad["omega"][0]["i"] = 5;
    CHECK_THROWS_AS(gblab::fixtures::frame_from_json(bad), gblab::ConfigError);

    bad = doc;
    bad["theta"][1][0]["values"] = std::vector<double>{1.0, 2.0};
    CHECK_THROWS_AS(gblab::fixtures::frame_from_json(bad), gblab::ConfigError);

    bad = doc;
    bad["theta"][0][0]["base"] = std::vector<int>{0, 1};
    CHECK_THROWS_AS(gblab::fixtures::frame_from_json(bad), gblab::ConfigError);

    CHECK_THROWS_AS(gblab::fixtures::frame_from_file("/nonexistent/path.json"),
                    gblab::ConfigError);
  }
}
