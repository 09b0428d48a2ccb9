#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

// Integer chain complexes attached to the sign-flip group (Z/2)^n: simplicial
// cells on the boundary of the cross-polytope, cubical cells on the boundary
// of the n-cube, the Kronecker pairing between them, the product cycle with
// its twisted group action, Smith-normal-form homology, and Monte-Carlo solid
// angles for the cone cells of a coframe.
namespace gblab::chains {

using Mask = std::uint32_t;

// Element of (Z/2)^n acting by coordinate sign flips; bit i set means
// coordinate i is negated.
struct GroupElement {
  int n = 0;
  Mask flips = 0;

  // Orientation character: -1 exactly when an odd number of axes flip.
  int epsilon() const;
  // Character of the action restricted to the axes in `subset`.
  int epsilon_on(Mask subset) const;
  GroupElement compose(const GroupElement& other) const;
};

GroupElement antipodal_element(int n);

// Canonical cell key shared by both complexes: the set of axes the cell
// spans plus a flip pattern supported inside that set.
struct Cell {
  Mask members = 0;
  Mask flips = 0;

  bool operator<(const Cell& o) const {
    return members != o.members ? members < o.members : flips < o.flips;
  }
  bool operator==(const Cell& o) const {
    return members == o.members && flips == o.flips;
  }
};

// Finitely supported integer combination of cells.
using Chain = std::map<Cell, long long>;

// Sorted-mask normal form of a 0-based index tuple: permutation parity in the
// sign, 0 for a repeated index. DomainError on an index outside [0, n).
std::pair<Mask, int> normalize_indices(const std::vector<int>& indices, int n);

// Single-cell chains from possibly unsorted index tuples; the permutation
// sign lands in the coefficient and a repeated index yields the zero chain.
// `cell_flips` must be supported inside the tuple (DomainError otherwise).
Chain simplex_cell(const std::vector<int>& indices, Mask cell_flips, int n);
Chain cube_cell(const std::vector<int>& indices, Mask cell_flips, int n);

int simplex_dimension(const Cell& c);       // one less than the axis count
int cube_dimension(const Cell& c, int n);   // n minus the axis count

void accumulate(Chain& into, const Chain& c, long long scale = 1);
void remove_zeros(Chain& c);

// Alternating face boundary of simplicial chains; vertices are ordered by
// increasing axis index and a 0-simplex has empty boundary.
Chain boundary_simplex(const Chain& c, int n);

// Cubical boundary: each free axis i joins the spanning set with both flip
// states, signed by the number of spanning axes below i; top cells in the
// grading (all axes spanning) have empty boundary.
Chain boundary_cube(const Chain& c, int n);

// Bare action on simplicial cells: the flip pattern shifts inside the
// spanning set and the coefficient is untouched.
Chain group_act_simplex(const GroupElement& h, const Chain& c);

// Geometric action on cubical cells: the same shift weighted by the
// character of h on the complementary (free) axes.  The weight is what makes
// boundary_cube equivariant.
Chain group_act_cube(const GroupElement& h, const Chain& c);

// Kronecker pairing: matching keys multiply coefficients weighted by the
// orientation sign (-1)^|flips|, everything else pairs to zero.  With this
// weight boundary_cube and boundary_simplex are adjoint to each other.
long long duality_pairing(const Chain& cube_chain, const Chain& simplex_chain);

// Product cells and chains over (simplex, cube) pairs.
struct DoubleCell {
  Cell simplex;
  Cell cube;

  bool operator<(const DoubleCell& o) const {
    if (!(simplex == o.simplex)) return simplex < o.simplex;
    return cube < o.cube;
  }
  bool operator==(const DoubleCell& o) const {
    return simplex == o.simplex && cube == o.cube;
  }
};

using DoubleChain = std::map<DoubleCell, long long>;

void accumulate_double(DoubleChain& into, const DoubleChain& c, long long scale = 1);
void remove_zeros_double(DoubleChain& c);

// Product-rule boundary: simplicial boundary on the first factor plus the
// cubical boundary on the second weighted by the parity of the simplex
// dimension.
DoubleChain boundary_double(const DoubleChain& c, int n);

// The diagonal pairing cycle: for every axis subset I and every flip pattern
// g inside I, the (simplex, cube) pair keyed by (I, g) weighted by the
// orientation character of g, with a layer-wise alternating scalar.
// DomainError for n < 2.
DoubleChain fundamental_cycle(int n);

bool is_cycle(const DoubleChain& c, int n);

// Acts on the cube factor through the geometric action and weights every
// term by the full orientation character of h; simplex keys are untouched.
// Sends cycles to cycles.
DoubleChain twisted_action(const GroupElement& h, const DoubleChain& c);

// Cube parts of the vertex layer (single-axis simplex factor), with signs.
Chain vertex_layer_cubes(const DoubleChain& c);

// What the vertex layer must equal once the simplex factor is collapsed:
// for each axis, the plain cube cell plus (-1)^n times the antipodal image.
Chain vertex_layer_reference(int n);

// Sum over the whole group of epsilon(h) * epsilon_on(subset)(h); vanishes
// unless the subset is everything, where it equals the group order.
long long character_sum(Mask subset, int n);

struct HomologyResult {
  std::vector<long long> betti;                 // by dimension, 0 .. n-1
  std::vector<std::vector<long long>> torsion;  // invariant factors > 1
};

// Integer homology of the cubical complex (boundary of the n-cube).
HomologyResult cube_homology(int n);
// Integer homology of the simplicial complex (boundary of the cross-polytope).
HomologyResult simplex_homology(int n);

// Smith normal form diagonal (non-negative, divisibility chain) of an
// integer matrix given as rows of equal length.
std::vector<long long> smith_normal_diagonal(std::vector<std::vector<long long>> m);

struct SolidAngleOptions {
  std::uint64_t seed = 0xC0FFEE;
  std::size_t samples = 1'000'000;
};

// Share of directions on the unit sphere where the `axis`-th coframe value
// dominates every coframe value in magnitude, with the given sign (+1/-1).
// Estimated by seeded Monte Carlo; FrameError on a singular coframe.
double solid_angle(const std::vector<std::vector<double>>& coframe, int axis, int sign,
                   const SolidAngleOptions& opt = {});

// All 2n cone fractions, ordered (axis 0, +), (axis 0, -), (axis 1, +), ...
// A single sample pass assigns each draw to exactly one cone, so the
// fractions sum to one up to rounding.
std::vector<double> solid_angle_fractions(const std::vector<std::vector<double>>& coframe,
                                          const SolidAngleOptions& opt = {});

// One minus the sum of the cone fractions; DomainError when a fraction
// leaves [0, 1]. Compensated accumulation keeps analytic tilings exact.
double hazzidakis_rhs(const std::vector<double>& fractions);

// JSON interchange. Single chains serialize as {"n": ..., "cells": [{"g":
// [+-1 per axis], "I": [1-based axes], "coeff": ...}]}; product chains nest
// the same cell shape under "simplex" and "cube". ConfigError on malformed
// input.
nlohmann::json chain_to_json(const Chain& c, int n);
Chain chain_from_json(const nlohmann::json& j, int& n_out);
nlohmann::json double_chain_to_json(const DoubleChain& c, int n);
DoubleChain double_chain_from_json(const nlohmann::json& j, int& n_out);

}  // namespace gblab::chains
