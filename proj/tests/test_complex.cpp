#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "gblab/chains.hpp"
#include "gblab/errors.hpp"

using gblab::chains::Cell;
using gblab::chains::Chain;
using gblab::chains::DoubleChain;
using gblab::chains::GroupElement;
using gblab::chains::Mask;

namespace {

// Visit every cell of the given rank: any nonempty spanning set, any flip
// pattern supported inside it.
void for_each_cell(int n, const std::function<void(Cell)>& fn) {
  const Mask full = (Mask(1) << n) - 1;
  for (Mask members = 1; members <= full; ++members) {
    Mask flips = 0;
    while (true) {
      fn(Cell{members, flips});
      if (flips == members) break;
      flips = (flips - members) & members;
    }
  }
}

Chain single(Cell c, long long coeff = 1) { return Chain{{c, coeff}}; }

}  // namespace

TEST_CASE("index tuples normalize with permutation signs") {
  Chain fwd = gblab::chains::simplex_cell({0, 1}, 0, 3);
  Chain rev = gblab::chains::simplex_cell({1, 0}, 0, 3);
  Chain sum = fwd;
  gblab::chains::accumulate(sum, rev);
  CHECK(sum.empty());
  CHECK(rev.begin()->second == -1);

  CHECK(gblab::chains::simplex_cell({1, 1}, 0, 3).empty());
  CHECK_THROWS_AS(gblab::chains::simplex_cell({0}, 0b10, 3), gblab::DomainError);
  CHECK_THROWS_AS(gblab::chains::normalize_indices({3}, 3), gblab::DomainError);
}

TEST_CASE("simplicial boundary alternates over ordered vertices") {
  Chain edge = gblab::chains::simplex_cell({0, 1}, 0, 2);
  Chain bd = gblab::chains::boundary_simplex(edge, 2);
  Chain expected = gblab::chains::simplex_cell({1}, 0, 2);
  gblab::chains::accumulate(expected, gblab::chains::simplex_cell({0}, 0, 2), -1);
  CHECK(bd == expected);

  Chain vertex = gblab::chains::simplex_cell({0}, 0, 2);
  CHECK(gblab::chains::boundary_simplex(vertex, 2).empty());
}

TEST_CASE("both boundaries square to zero") {
  const int n = 4;
  for_each_cell(n, [&](Cell c) {
    Chain cc = single(c);
    CHECK(gblab::chains::boundary_simplex(
              gblab::chains::boundary_simplex(cc, n), n)
              .empty());
    CHECK(gblab::chains::boundary_cube(gblab::chains::boundary_cube(cc, n), n)
              .empty());
  });
}

TEST_CASE("cube and simplex boundaries are adjoint under the pairing") {
  const int n = 4;
  std::vector<Cell> cells;
  for_each_cell(n, [&](Cell c) { cells.push_back(c); });
  for (const Cell& x : cells) {
    Chain bx = gblab::chains::boundary_cube(single(x), n);
    for (const Cell& y : cells) {
      Chain by = gblab::chains::boundary_simplex(single(y), n);
      CHECK(gblab::chains::duality_pairing(bx, single(y)) ==
            gblab::chains::duality_pairing(single(x), by));
    }
  }
}

TEST_CASE("group actions commute with the matching boundaries") {
  const int n = 3;
  for (Mask f = 0; f < (Mask(1) << n); ++f) {
    GroupElement h{n, f};
    for_each_cell(n, [&](Cell c) {
      Chain cc = single(c);

      Chain lhs_cube = gblab::chains::boundary_cube(
          gblab::chains::group_act_cube(h, cc), n);
      Chain rhs_cube = gblab::chains::group_act_cube(
          h, gblab::chains::boundary_cube(cc, n));
      CHECK(lhs_cube == rhs_cube);

      Chain lhs_simp = gblab::chains::boundary_simplex(
          gblab::chains::group_act_simplex(h, cc), n);
      Chain rhs_simp = gblab::chains::group_act_simplex(
          h, gblab::chains::boundary_simplex(cc, n));
      CHECK(lhs_simp == rhs_simp);
    });
  }
}

TEST_CASE("the diagonal pairing cycle is closed and finite") {
  DoubleChain z = gblab::chains::fundamental_cycle(2);
  CHECK(z.size() == 8);
  for (const auto& [cell, coeff] : z) CHECK((coeff == 1 || coeff == -1));
  CHECK(gblab::chains::is_cycle(z, 2));

  CHECK_THROWS_AS(gblab::chains::fundamental_cycle(1), gblab::DomainError);
}

TEST_CASE("the twisted action preserves cycles and is an involution") {
  for (int n = 2; n <= 4; ++n) {
    DoubleChain z = gblab::chains::fundamental_cycle(n);
    for (Mask f = 0; f < (Mask(1) << n); ++f) {
      GroupElement h{n, f};
      DoubleChain moved = gblab::chains::twisted_action(h, z);
      CHECK(gblab::chains::is_cycle(moved, n));
      CHECK(gblab::chains::twisted_action(h, moved) == z);
    }
  }
}

TEST_CASE("the vertex layer collapses to the signed antipodal pair") {
  for (int n = 2; n <= 4; ++n) {
    Chain layer =
        gblab::chains::vertex_layer_cubes(gblab::chains::fundamental_cycle(n));
    Chain diff = layer;
    gblab::chains::accumulate(diff, gblab::chains::vertex_layer_reference(n), -1);
    CHECK(diff.empty());
  }
}

TEST_CASE("signed character sums vanish except on the full axis set") {
  const int n = 4;
  const Mask full = (Mask(1) << n) - 1;
  for (Mask subset = 0; subset <= full; ++subset) {
    long long expected = (subset == full) ? (1LL << n) : 0;
    CHECK(gblab::chains::character_sum(subset, n) == expected);
  }
}

TEST_CASE("smith normal form homology of the model complexes") {
  auto torsion_free = [](const gblab::chains::HomologyResult& hr) {
    for (const auto& factors : hr.torsion)
      if (!factors.empty()) return false;
    return true;
  };

  auto cube2 = gblab::chains::cube_homology(2);
  CHECK(cube2.betti == std::vector<long long>{1, 1});
  CHECK(torsion_free(cube2));

  auto cube3 = gblab::chains::cube_homology(3);
  CHECK(cube3.betti == std::vector<long long>{1, 0, 1});
  CHECK(torsion_free(cube3));

  auto simp3 = gblab::chains::simplex_homology(3);
  CHECK(simp3.betti == std::vector<long long>{1, 0, 1});
  CHECK(torsion_free(simp3));

  CHECK_THROWS_AS(gblab::chains::cube_homology(1), gblab::DomainError);
  CHECK_THROWS_AS(gblab::chains::cube_homology(9), gblab::DomainError);
  CHECK_THROWS_AS(gblab::chains::simplex_homology(1), gblab::DomainError);
}

TEST_CASE("smith normal diagonal keeps the divisibility chain") {
  std::vector<std::vector<long long>> m = {{2, 4}, {6, 8}};
  CHECK(gblab::chains::smith_normal_diagonal(m) ==
        std::vector<long long>{2, 4});

  std::vector<std::vector<long long>> id3 = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(gblab::chains::smith_normal_diagonal(id3) ==
        std::vector<long long>{1, 1, 1});
}

TEST_CASE("monte carlo cone fractions tile the sphere") {
  gblab::chains::SolidAngleOptions opt;  // pinned seed keeps this reproducible

  std::vector<std::vector<double>> identity2 = {{1.0, 0.0}, {0.0, 1.0}};
  auto fr = gblab::chains::solid_angle_fractions(identity2, opt);
  REQUIRE(fr.size() == 4);
  for (double f : fr) CHECK(f == doctest::Approx(0.25).epsilon(8e-3));

  // one call per cone must agree with the single-pass tally bit for bit
  CHECK(gblab::chains::solid_angle(identity2, 1, -1, opt) == fr[3]);

  // dense angular scan as an independent oracle for a sheared plane coframe
  std::vector<std::vector<double>> sheared = {{1.0, 0.0}, {0.5, 1.0}};
  auto fs = gblab::chains::solid_angle_fractions(sheared, opt);
  const int scan = 2'000'000;
  std::vector<double> oracle(4, 0.0);
  for (int k = 0; k < scan; ++k) {
    double phi = (k + 0.5) * (2.0 * std::numbers::pi / scan);
    double v0 = std::cos(phi), v1 = std::sin(phi);
    double w0 = sheared[0][0] * v0 + sheared[0][1] * v1;
    double w1 = sheared[1][0] * v0 + sheared[1][1] * v1;
    int axis = std::abs(w0) >= std::abs(w1) ? 0 : 1;
    double val = axis == 0 ? w0 : w1;
    oracle[2 * axis + (val < 0.0 ? 1 : 0)] += 1.0 / scan;
  }
  for (int i = 0; i < 4; ++i) CHECK(std::abs(fs[i] - oracle[i]) <= 2.5e-3);

  CHECK_THROWS_AS(
      gblab::chains::solid_angle_fractions({{1.0, 0.0}, {1.0, 0.0}}, opt),
      gblab::FrameError);
}

TEST_CASE("tiling defect evaluates exactly on analytic fractions") {
  for (int n = 2; n <= 8; ++n) {
    std::vector<double> fr(2 * n, 1.0 / (2 * n));
    CHECK(gblab::chains::hazzidakis_rhs(fr) == 0.0);
  }
  CHECK(gblab::chains::hazzidakis_rhs({0.3, 0.3, 0.3, 0.3}) ==
        doctest::Approx(-0.2).epsilon(1e-14));
  CHECK_THROWS_AS(gblab::chains::hazzidakis_rhs({0.5, -0.1}), gblab::DomainError);
  CHECK_THROWS_AS(gblab::chains::hazzidakis_rhs({0.5, 1.1}), gblab::DomainError);
}

TEST_CASE("chains round-trip through json") {
  const int n = 3;
  Chain c = gblab::chains::cube_cell({0, 2}, 0b100, n);
  gblab::chains::accumulate(c, gblab::chains::cube_cell({1}, 0, n), -2);
  int n_out = 0;
  Chain back = gblab::chains::chain_from_json(gblab::chains::chain_to_json(c, n),
                                              n_out);
  CHECK(back == c);
  CHECK(n_out == n);

  DoubleChain z = gblab::chains::fundamental_cycle(3);
  DoubleChain zback = gblab::chains::double_chain_from_json(
      gblab::chains::double_chain_to_json(z, 3), n_out);
  CHECK(zback == z);
  CHECK(n_out == 3);
}

TEST_CASE("malformed chain documents are refused") {
  using nlohmann::json;
  auto cells = [](json cell) {
    return json{{"n", 2}, {"cells", json::array({std::move(cell)})}};
  };
  int nn = 0;

  CHECK_THROWS_AS(
      gblab::chains::chain_from_json(json{{"cells", json::array()}}, nn),
      gblab::ConfigError);

  json short_g = cells(json{{"g", {1}}, {"I", {1}}, {"coeff", 1}});
  CHECK_THROWS_AS(gblab::chains::chain_from_json(short_g, nn), gblab::ConfigError);

  json zero_sign = cells(json{{"g", {1, 0}}, {"I", {1}}, {"coeff", 1}});
  CHECK_THROWS_AS(gblab::chains::chain_from_json(zero_sign, nn), gblab::ConfigError);

  json unsorted = cells(json{{"g", {1, 1}}, {"I", {2, 1}}, {"coeff", 1}});
  CHECK_THROWS_AS(gblab::chains::chain_from_json(unsorted, nn), gblab::ConfigError);

  // a sign flip on an axis the cell does not span
  json stray_flip = cells(json{{"g", {-1, 1}}, {"I", {2}}, {"coeff", 1}});
  CHECK_THROWS_AS(gblab::chains::chain_from_json(stray_flip, nn), gblab::ConfigError);

  json frac_coeff = cells(json{{"g", {1, 1}}, {"I", {1}}, {"coeff", 1.5}});
  CHECK_THROWS_AS(gblab::chains::chain_from_json(frac_coeff, nn), gblab::ConfigError);
}
