#include "gblab/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gblab/errors.hpp"

namespace gblab::fixtures {

using forms::Mask;
using forms::MixedForm;
using grid::GridFn;
using grid::GridPtr;

namespace {

constexpr double kPi = std::numbers::pi;

MixedForm one_form(const GridPtr& g, int rank, int axis, GridFn c) {
  MixedForm f(g, rank, 1, 0);
  f.add_term(Mask{1} << axis, 0, c);
  return f;
}

MixedForm zero_one_form(const GridPtr& g, int rank) { return MixedForm(g, rank, 1, 0); }

}  // namespace

FrameConnection hyperbolic_half_plane(int res) {
  GridPtr g = grid::make_grid({{-1.0, 1.0, res}, {0.5, 2.0, res}});
  GridFn inv_y2 = grid::sample(*g, [](const double* y) { return 1.0 / y[1]; });
  FrameConnection conn;
  conn.grid = g;
  conn.rank = 2;
  conn.theta = {one_form(g, 2, 0, inv_y2), one_form(g, 2, 1, inv_y2)};
  conn.omega.emplace(std::make_pair(0, 1), one_form(g, 2, 0, grid::scaled(inv_y2, -1.0)));
  return conn;
}

FrameConnection round_sphere(int res, double radius) {
  GridPtr g = grid::make_grid({{0.0, kPi, res}, {0.0, 2.0 * kPi, res}});
  FrameConnection conn;
  conn.grid = g;
  conn.rank = 2;
  conn.theta = {
      one_form(g, 2, 0, grid::constant(*g, radius)),
      one_form(g, 2, 1,
               grid::sample(*g, [&](const double* y) { return radius * std::sin(y[0]); }))};
  conn.omega.emplace(
      std::make_pair(0, 1),
      one_form(g, 2, 1, grid::sample(*g, [](const double* y) { return -std::cos(y[0]); })));
  return conn;
}

FrameConnection flat_torus(int res) {
  GridPtr g = grid::make_grid({{0.0, 2.0 * kPi, res}, {0.0, 2.0 * kPi, res}});
  FrameConnection conn;
  conn.grid = g;
  conn.rank = 2;
  conn.theta = {one_form(g, 2, 0, grid::constant(*g, 1.0)),
                one_form(g, 2, 1, grid::constant(*g, 1.0))};
  return conn;
}

FrameConnection pseudosphere(const sg::SineGordonSolution& sol) {
  const GridPtr& g = sol.grid;
  GridFn c(g->size()), s(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    c[i] = std::cos(sol.theta[i] / 2.0);
    s[i] = std::sin(sol.theta[i] / 2.0);
  }
  GridFn tz = grid::derivative(*g, sol.theta, 0);
  GridFn tw = grid::derivative(*g, sol.theta, 1);

  FrameConnection conn;
  conn.grid = g;
  conn.rank = 2;
  MixedForm theta1(g, 2, 1, 0);
  theta1.add_term(Mask{1} << 0, 0, c);
  theta1.add_term(Mask{1} << 1, 0, c);
  MixedForm theta2(g, 2, 1, 0);
  theta2.add_term(Mask{1} << 0, 0, s, -1.0);
  theta2.add_term(Mask{1} << 1, 0, s);
  conn.theta = {std::move(theta1), std::move(theta2)};

  MixedForm om(g, 2, 1, 0);
  om.add_term(Mask{1} << 0, 0, tz, 0.5);
  om.add_term(Mask{1} << 1, 0, tw, -0.5);
  conn.omega.emplace(std::make_pair(0, 1), std::move(om));
  return conn;
}

FrameConnection closed_surface(const std::string& name, int res) {
  if (name == "round_sphere") return round_sphere(res);
  if (name == "round_sphere_radius2") return round_sphere(res, 2.0);
  if (name == "flat_torus") return flat_torus(res);
  throw FixtureError("unknown closed-surface fixture: " + name);
}

AdaptedPair adapted_pair(const std::string& name, int res) {
  AdaptedPair pair;
  if (name == "cylinder") {
    GridPtr g = grid::make_grid({{0.0, 2.0 * kPi, res}, {0.0, 1.0, res}});
    GridFn one = grid::constant(*g, 1.0);
    pair.ambient.grid = g;
    pair.ambient.rank = 3;
    pair.ambient.theta = {one_form(g, 3, 0, one), one_form(g, 3, 1, one),
                          zero_one_form(g, 3)};
    pair.ambient.omega.emplace(std::make_pair(0, 2), one_form(g, 3, 0, one));
    pair.boundary.grid = g;
    pair.boundary.rank = 2;
    pair.boundary.theta = {one_form(g, 2, 0, one), one_form(g, 2, 1, one)};
    return pair;
  }
  if (name == "round_sphere") {
    GridPtr g = grid::make_grid({{0.0, kPi, res}, {0.0, 2.0 * kPi, res}});
    GridFn one = grid::constant(*g, 1.0);
    GridFn sin_rho = grid::sample(*g, [](const double* y) { return std::sin(y[0]); });
    GridFn neg_cos = grid::sample(*g, [](const double* y) { return -std::cos(y[0]); });
    pair.ambient.grid = g;
    pair.ambient.rank = 3;
    pair.ambient.theta = {one_form(g, 3, 0, one), one_form(g, 3, 1, sin_rho),
                          zero_one_form(g, 3)};
    pair.ambient.omega.emplace(std::make_pair(0, 1), one_form(g, 3, 1, neg_cos));
    pair.ambient.omega.emplace(std::make_pair(0, 2), one_form(g, 3, 0, one));
    pair.ambient.omega.emplace(std::make_pair(1, 2), one_form(g, 3, 1, sin_rho));
    pair.boundary.grid = g;
    pair.boundary.rank = 2;
    pair.boundary.theta = {one_form(g, 2, 0, one), one_form(g, 2, 1, sin_rho)};
    pair.boundary.omega.emplace(std::make_pair(0, 1), one_form(g, 2, 1, neg_cos));
    return pair;
  }
  if (name == "flat_plane") {
    GridPtr g = grid::make_grid({{0.0, 1.0, res}, {0.0, 1.0, res}});
    GridFn one = grid::constant(*g, 1.0);
    pair.ambient.grid = g;
    pair.ambient.rank = 3;
    pair.ambient.theta = {one_form(g, 3, 0, one), one_form(g, 3, 1, one),
                          zero_one_form(g, 3)};
    pair.boundary.grid = g;
    pair.boundary.rank = 2;
    pair.boundary.theta = {one_form(g, 2, 0, one), one_form(g, 2, 1, one)};
    return pair;
  }
  throw FixtureError("unknown adapted-pair fixture: " + name);
}

frames::PrincipalFrameData pseudosphere_principal(const sg::SineGordonSolution& sol) {
  const GridPtr& g = sol.grid;
  frames::PrincipalFrameData data;
  data.x.resize(2, GridFn(g->size()));
  for (std::size_t i = 0; i < g->size(); ++i) {
    data.x[0][i] = std::cos(sol.theta[i] / 2.0);
    data.x[1][i] = std::sin(sol.theta[i] / 2.0);
  }
  data.y = {grid::sample(*g, [](const double* y) { return y[0] + y[1]; }),
            grid::sample(*g, [](const double* y) { return y[1] - y[0]; })};

  // e_1 = (d_z + d_w)/(2 cos(t/2)), e_2 = (d_w - d_z)/(2 sin(t/2)).
  GridFn h1(g->size()), h2(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    h1[i] = 0.5 / data.x[0][i];
    h2[i] = 0.5 / data.x[1][i];
  }
  data.frame_vectors = {{h1, h1}, {grid::scaled(h2, -1.0), h2}};

  MixedForm phi(g, 2, 1, 0);
  phi.add_term(Mask{1} << 0, 0, grid::derivative(*g, sol.theta, 0), 0.5);
  phi.add_term(Mask{1} << 1, 0, grid::derivative(*g, sol.theta, 1), 0.5);
  data.phi.emplace(std::make_pair(0, 1), std::move(phi));
  return data;
}

namespace {

MixedForm form_from_terms(const nlohmann::json& terms, const GridPtr& g, int rank) {
  MixedForm f(g, rank, 1, 0);
  for (const auto& term : terms) {
    if (!term.contains("base") || !term["base"].is_array())
      throw ConfigError("frame term needs a \"base\" axis list");
    std::vector<int> base = term["base"].get<std::vector<int>>();
    if (base.size() != 1)
      throw ConfigError("frame terms must be one-forms (one base axis each)");
    if (base[0] < 0 || base[0] >= g->dim())
      throw ConfigError("frame term base axis out of range");
    GridFn c;
    if (term.contains("values")) {
      c = term["values"].get<GridFn>();
      if (c.size() != g->size())
        throw ConfigError("frame term sample count does not match the grid");
    } else if (term.contains("constant")) {
      c = grid::constant(*g, term["constant"].get<double>());
    } else {
      throw ConfigError("frame term needs \"values\" or \"constant\"");
    }
    f.add_term(Mask{1} << base[0], 0, c);
  }
  return f;
}

}  // namespace

FrameConnection frame_from_json(const nlohmann::json& doc) {
  if (!doc.contains("axes") || !doc["axes"].is_array() || doc["axes"].empty())
    throw ConfigError("frame JSON needs an \"axes\" array");
  std::vector<grid::Axis> axes;
  for (const auto& ax : doc["axes"])
    axes.push_back({ax.at("lo").get<double>(), ax.at("hi").get<double>(),
                    ax.at("res").get<int>()});
  GridPtr g;
  try {
    g = grid::make_grid(std::move(axes));
  } catch (const GridError& e) {
    throw ConfigError(std::string("bad axis entry: ") + e.what());
  }

  if (!doc.contains("rank")) throw ConfigError("frame JSON needs \"rank\"");
  const int rank = doc["rank"].get<int>();
  if (rank <= 0) throw ConfigError("frame rank must be positive");

  FrameConnection conn;
  conn.grid = g;
  conn.rank = rank;
  if (doc.contains("theta")) {
    if (static_cast<int>(doc["theta"].size()) != rank)
      throw ConfigError("theta list length must equal the rank");
    for (const auto& terms : doc["theta"])
      conn.theta.push_back(form_from_terms(terms, g, rank));
  }
  if (doc.contains("omega")) {
    for (const auto& entry : doc["omega"]) {
      const int i = entry.at("i").get<int>(), j = entry.at("j").get<int>();
      if (i < 0 || j < 0 || i >= rank || j >= rank || i == j)
        throw ConfigError("omega indices out of range");
      MixedForm om = form_from_terms(entry.at("terms"), g, rank);
      if (i < j)
        conn.omega.emplace(std::make_pair(i, j), std::move(om));
      else
        conn.omega.emplace(std::make_pair(j, i), forms::scale(om, -1.0));
    }
  }
  return conn;
}

FrameConnection frame_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open frame file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("frame file is not valid JSON: ") + e.what());
  }
  return frame_from_json(doc);
}

}  // namespace gblab::fixtures
