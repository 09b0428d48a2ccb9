#include "gblab/chains.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "gblab/errors.hpp"

namespace gblab::chains {

namespace {

Mask full_mask(int n) {
  if (n < 1 || n > 30) throw DomainError("axis count out of range");
  return (Mask(1) << n) - 1;
}

int parity_sign(Mask m) { return std::popcount(m) % 2 == 0 ? 1 : -1; }

Chain single_cell(const std::vector<int>& indices, Mask cell_flips, int n) {
  if (indices.empty()) throw DomainError("a cell needs at least one axis");
  auto [mask, sign] = normalize_indices(indices, n);
  Chain out;
  if (sign == 0) return out;
  if (cell_flips & ~mask) throw DomainError("flips must lie inside the cell axes");
  out[Cell{mask, cell_flips}] = sign;
  return out;
}

}  // namespace

int GroupElement::epsilon() const { return parity_sign(flips & full_mask(n)); }

int GroupElement::epsilon_on(Mask subset) const { return parity_sign(flips & subset); }

GroupElement GroupElement::compose(const GroupElement& other) const {
  if (n != other.n) throw DomainError("group elements live in different ranks");
  return GroupElement{n, flips ^ other.flips};
}

GroupElement antipodal_element(int n) { return GroupElement{n, full_mask(n)}; }

std::pair<Mask, int> normalize_indices(const std::vector<int>& indices, int n) {
  full_mask(n);  // validates n
  std::vector<int> v = indices;
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] >= n) throw DomainError("axis index out of range");
    std::size_t j = i;
    while (j > 0 && v[j - 1] > v[j]) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
      --j;
    }
    if (j > 0 && v[j - 1] == v[j]) return {0, 0};
  }
  Mask m = 0;
  for (int i : v) m |= Mask(1) << i;
  return {m, sign};
}

Chain simplex_cell(const std::vector<int>& indices, Mask cell_flips, int n) {
  return single_cell(indices, cell_flips, n);
}

Chain cube_cell(const std::vector<int>& indices, Mask cell_flips, int n) {
  return single_cell(indices, cell_flips, n);
}

int simplex_dimension(const Cell& c) { return std::popcount(c.members) - 1; }

int cube_dimension(const Cell& c, int n) { return n - std::popcount(c.members); }

void accumulate(Chain& into, const Chain& c, long long scale) {
  for (const auto& [cell, coeff] : c) into[cell] += scale * coeff;
  remove_zeros(into);
}

void remove_zeros(Chain& c) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0)
      it = c.erase(it);
    else
      ++it;
  }
}

Chain boundary_simplex(const Chain& c, int n) {
  const Mask full = full_mask(n);
  Chain out;
  for (const auto& [cell, coeff] : c) {
    if (coeff == 0) continue;
    if (cell.members & ~full) throw DomainError("cell spans axes outside the rank");
    if (std::popcount(cell.members) <= 1) continue;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (!((cell.members >> i) & 1u)) continue;
      const Mask face = cell.members & ~(Mask(1) << i);
      out[Cell{face, cell.flips & face}] += (pos % 2 == 0) ? coeff : -coeff;
      ++pos;
    }
  }
  remove_zeros(out);
  return out;
}

Chain boundary_cube(const Chain& c, int n) {
  const Mask full = full_mask(n);
  Chain out;
  for (const auto& [cell, coeff] : c) {
    if (coeff == 0) continue;
    if (cell.members & ~full) throw DomainError("cell spans axes outside the rank");
    for (int i = 0; i < n; ++i) {
      const Mask bit = Mask(1) << i;
      if (cell.members & bit) continue;
      const long long s =
          parity_sign(cell.members & (bit - 1)) > 0 ? coeff : -coeff;
      const Mask grown = cell.members | bit;
      out[Cell{grown, cell.flips}] += s;
      out[Cell{grown, cell.flips | bit}] -= s;
    }
  }
  remove_zeros(out);
  return out;
}

Chain group_act_simplex(const GroupElement& h, const Chain& c) {
  Chain out;
  for (const auto& [cell, coeff] : c)
    out[Cell{cell.members, cell.flips ^ (h.flips & cell.members)}] += coeff;
  remove_zeros(out);
  return out;
}

Chain group_act_cube(const GroupElement& h, const Chain& c) {
  const Mask full = full_mask(h.n);
  Chain out;
  for (const auto& [cell, coeff] : c) {
    const int weight = h.epsilon_on(full & ~cell.members);
    out[Cell{cell.members, cell.flips ^ (h.flips & cell.members)}] += weight * coeff;
  }
  remove_zeros(out);
  return out;
}

long long duality_pairing(const Chain& cube_chain, const Chain& simplex_chain) {
  const Chain* small = &cube_chain;
  const Chain* big = &simplex_chain;
  if (big->size() < small->size()) std::swap(small, big);
  long long total = 0;
  for (const auto& [cell, coeff] : *small) {
    auto it = big->find(cell);
    // Each reflected axis reverses the relative orientation of the two dual
    // cells, so matching keys contribute with the parity of the vertex signs.
    // This is the unique weight making the two boundaries mutually adjoint.
    if (it != big->end()) total += parity_sign(cell.flips) * coeff * it->second;
  }
  return total;
}

void accumulate_double(DoubleChain& into, const DoubleChain& c, long long scale) {
  for (const auto& [cell, coeff] : c) into[cell] += scale * coeff;
  remove_zeros_double(into);
}

void remove_zeros_double(DoubleChain& c) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0)
      it = c.erase(it);
    else
      ++it;
  }
}

DoubleChain boundary_double(const DoubleChain& c, int n) {
  DoubleChain out;
  for (const auto& [dc, coeff] : c) {
    if (coeff == 0) continue;
    Chain sone;
    sone[dc.simplex] = 1;
    for (const auto& [face, s] : boundary_simplex(sone, n))
      out[DoubleCell{face, dc.cube}] += coeff * s;
    Chain cone;
    cone[dc.cube] = 1;
    const long long ksign = simplex_dimension(dc.simplex) % 2 == 0 ? 1 : -1;
    for (const auto& [face, s] : boundary_cube(cone, n))
      out[DoubleCell{dc.simplex, face}] += coeff * ksign * s;
  }
  remove_zeros_double(out);
  return out;
}

DoubleChain fundamental_cycle(int n) {
  if (n < 2) throw DomainError("the pairing cycle needs rank at least 2");
  const Mask top = full_mask(n);
  DoubleChain z;
  for (Mask I = 1; I <= top; ++I) {
    const int k = std::popcount(I) - 1;
    const long long layer = ((k * (k + 1) / 2) % 2 == 0) ? 1 : -1;
    Mask g = 0;
    do {
      z[DoubleCell{Cell{I, g}, Cell{I, g}}] += layer * parity_sign(g);
      g = (g - I) & I;
    } while (g != 0);
  }
  return z;
}

bool is_cycle(const DoubleChain& c, int n) { return boundary_double(c, n).empty(); }

DoubleChain twisted_action(const GroupElement& h, const DoubleChain& c) {
  const Mask full = full_mask(h.n);
  const long long eps = h.epsilon();
  DoubleChain out;
  for (const auto& [dc, coeff] : c) {
    const long long weight = eps * h.epsilon_on(full & ~dc.cube.members);
    const Cell moved{dc.cube.members, dc.cube.flips ^ (h.flips & dc.cube.members)};
    out[DoubleCell{dc.simplex, moved}] += weight * coeff;
  }
  remove_zeros_double(out);
  return out;
}

Chain vertex_layer_cubes(const DoubleChain& c) {
  Chain out;
  for (const auto& [dc, coeff] : c)
    if (std::popcount(dc.simplex.members) == 1) out[dc.cube] += coeff;
  remove_zeros(out);
  return out;
}

Chain vertex_layer_reference(int n) {
  const GroupElement A = antipodal_element(n);
  const long long sgn = n % 2 == 0 ? 1 : -1;
  Chain out;
  for (int i = 0; i < n; ++i) {
    Chain base = cube_cell({i}, 0, n);
    accumulate(out, base);
    accumulate(out, group_act_cube(A, base), sgn);
  }
  return out;
}

long long character_sum(Mask subset, int n) {
  const Mask full = full_mask(n);
  if (subset & ~full) throw DomainError("subset spans axes outside the rank");
  long long total = 0;
  for (Mask h = 0; h <= full; ++h)
    total += parity_sign(h) * parity_sign(h & subset);
  return total;
}

namespace {

std::vector<Cell> cells_with_axis_count(int n, int count) {
  const Mask top = full_mask(n);
  std::vector<Cell> out;
  for (Mask I = 1; I <= top; ++I) {
    if (std::popcount(I) != count) continue;
    Mask f = 0;
    do {
      out.push_back(Cell{I, f});
      f = (f - I) & I;
    } while (f != 0);
  }
  return out;
}

std::vector<std::vector<long long>> boundary_matrix(const std::vector<Cell>& domain,
                                                    const std::vector<Cell>& range,
                                                    bool use_cubes, int n) {
  std::map<Cell, std::size_t> row_of;
  for (std::size_t r = 0; r < range.size(); ++r) row_of[range[r]] = r;
  std::vector<std::vector<long long>> m(range.size(),
                                        std::vector<long long>(domain.size(), 0));
  for (std::size_t col = 0; col < domain.size(); ++col) {
    Chain one;
    one[domain[col]] = 1;
    const Chain b = use_cubes ? boundary_cube(one, n) : boundary_simplex(one, n);
    for (const auto& [face, v] : b) m.at(row_of.at(face))[col] = v;
  }
  return m;
}

HomologyResult homology_of(int n, bool use_cubes) {
  if (n < 2 || n > 8) throw DomainError("homology supported for ranks 2 through 8");
  std::vector<std::vector<Cell>> cells(n);
  for (int d = 0; d < n; ++d)
    cells[d] = cells_with_axis_count(n, use_cubes ? n - d : d + 1);
  std::vector<std::vector<long long>> diag(n);
  std::vector<long long> rank(n + 1, 0);
  for (int d = 1; d < n; ++d) {
    diag[d] = smith_normal_diagonal(boundary_matrix(cells[d], cells[d - 1], use_cubes, n));
    rank[d] = static_cast<long long>(diag[d].size());
  }
  HomologyResult out;
  out.betti.resize(n);
  out.torsion.resize(n);
  for (int d = 0; d < n; ++d) {
    out.betti[d] = static_cast<long long>(cells[d].size()) - rank[d] - rank[d + 1];
    if (d + 1 < n)
      for (long long v : diag[d + 1])
        if (v > 1) out.torsion[d].push_back(v);
  }
  return out;
}

}  // namespace

HomologyResult cube_homology(int n) { return homology_of(n, true); }

HomologyResult simplex_homology(int n) { return homology_of(n, false); }

std::vector<long long> smith_normal_diagonal(std::vector<std::vector<long long>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  for (const auto& r : m)
    if (r.size() != cols) throw DomainError("ragged matrix");
  std::vector<long long> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    std::size_t pr = rows, pc = cols;
    long long best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        const long long a = std::llabs(m[i][j]);
        if (a != 0 && (best == 0 || a < best)) {
          best = a;
          pr = i;
          pc = j;
        }
      }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    if (pc != t)
      for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        const long long q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) {
          std::swap(m[t], m[i]);
          again = true;
        }
      }
      if (again) continue;
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        const long long q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) {
          for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
          again = true;
        }
      }
      if (again) continue;
      for (std::size_t i = t + 1; i < rows && !again; ++i)
        for (std::size_t j = t + 1; j < cols && !again; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
            again = true;
          }
    }
    diag.push_back(std::llabs(m[t][t]));
    ++t;
  }
  return diag;
}

namespace {

void validate_coframe(const std::vector<std::vector<double>>& coframe) {
  const std::size_t n = coframe.size();
  if (n == 0) throw DomainError("empty coframe");
  for (const auto& row : coframe)
    if (row.size() != n) throw DomainError("coframe must be square");
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = coframe[i][j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(c);
  if (!lu.isInvertible()) throw FrameError("singular coframe");
}

}  // namespace

std::vector<double> solid_angle_fractions(const std::vector<std::vector<double>>& coframe,
                                          const SolidAngleOptions& opt) {
  validate_coframe(coframe);
  if (opt.samples == 0) throw DomainError("sample count must be positive");
  const int n = static_cast<int>(coframe.size());

  std::mt19937_64 rng(opt.seed);
  // 53-bit uniform in the open interval (0, 1); keeps the log finite.
  auto uniform = [&rng]() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  bool have_spare = false;
  double spare = 0.0;
  auto normal = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  };

  std::vector<long long> counts(2 * static_cast<std::size_t>(n), 0);
  std::vector<double> v(n);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    for (int i = 0; i < n; ++i) v[i] = normal();
    // The cone conditions are scale invariant, so the draw is not normalized.
    int best = 0;
    double best_mag = -1.0, best_val = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = 0.0;
      for (int j = 0; j < n; ++j) w += coframe[i][j] * v[j];
      const double mag = std::fabs(w);
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
        best_val = w;
      }
    }
    ++counts[2 * static_cast<std::size_t>(best) + (best_val < 0.0 ? 1 : 0)];
  }

  std::vector<double> fractions(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(opt.samples);
  return fractions;
}

double solid_angle(const std::vector<std::vector<double>>& coframe, int axis, int sign,
                   const SolidAngleOptions& opt) {
  if (axis < 0 || axis >= static_cast<int>(coframe.size()))
    throw DomainError("axis out of range");
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const auto fractions = solid_angle_fractions(coframe, opt);
  return fractions[2 * static_cast<std::size_t>(axis) + (sign < 0 ? 1 : 0)];
}

double hazzidakis_rhs(const std::vector<double>& fractions) {
  long double sum = 0.0L;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("cone fraction outside [0, 1]");
    sum += static_cast<long double>(f);
  }
  return 1.0 - static_cast<double>(sum);
}

namespace {

nlohmann::json cell_to_json(const Cell& c, int n) {
  nlohmann::json g = nlohmann::json::array();
  nlohmann::json axes = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    g.push_back(((c.flips >> i) & 1u) ? -1 : 1);
    if ((c.members >> i) & 1u) axes.push_back(i + 1);
  }
  return nlohmann::json{{"g", g}, {"I", axes}};
}

Cell cell_from_json(const nlohmann::json& j, int n) {
  if (!j.is_object() || !j.contains("g") || !j.contains("I"))
    throw ConfigError("cell must be an object with \"g\" and \"I\"");
  const auto& g = j.at("g");
  const auto& axes = j.at("I");
  if (!g.is_array() || static_cast<int>(g.size()) != n)
    throw ConfigError("\"g\" must list one sign per axis");
  if (!axes.is_array()) throw ConfigError("\"I\" must be an array of 1-based axes");
  Cell c;
  int prev = 0;
  for (const auto& e : axes) {
    if (!e.is_number_integer()) throw ConfigError("axis entries must be integers");
    const int axis = e.get<int>();
    if (axis < 1 || axis > n || axis <= prev)
      throw ConfigError("axes must be strictly increasing in [1, n]");
    prev = axis;
    c.members |= Mask(1) << (axis - 1);
  }
  for (int i = 0; i < n; ++i) {
    if (!g[i].is_number_integer()) throw ConfigError("signs must be integers");
    const int s = g[i].get<int>();
    if (s != 1 && s != -1) throw ConfigError("signs must be +1 or -1");
    if (s == -1) c.flips |= Mask(1) << i;
  }
  if (c.flips & ~c.members)
    throw ConfigError("flips must lie inside the spanned axes");
  return c;
}

int rank_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer())
    throw ConfigError("chain document needs an integer \"n\"");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > 30) throw ConfigError("\"n\" out of range");
  if (!j.contains("cells") || !j.at("cells").is_array())
    throw ConfigError("chain document needs a \"cells\" array");
  return n;
}

long long coeff_from_json(const nlohmann::json& e) {
  if (!e.contains("coeff") || !e.at("coeff").is_number_integer())
    throw ConfigError("every cell entry needs an integer \"coeff\"");
  return e.at("coeff").get<long long>();
}

}  // namespace

nlohmann::json chain_to_json(const Chain& c, int n) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [cell, coeff] : c) {
    nlohmann::json e = cell_to_json(cell, n);
    e["coeff"] = coeff;
    cells.push_back(std::move(e));
  }
  return nlohmann::json{{"n", n}, {"cells", std::move(cells)}};
}

Chain chain_from_json(const nlohmann::json& j, int& n_out) {
  const int n = rank_from_json(j);
  Chain out;
  for (const auto& e : j.at("cells")) {
    if (!e.is_object()) throw ConfigError("cell entries must be objects");
    out[cell_from_json(e, n)] += coeff_from_json(e);
  }
  remove_zeros(out);
  n_out = n;
  return out;
}

nlohmann::json double_chain_to_json(const DoubleChain& c, int n) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [dc, coeff] : c) {
    cells.push_back(nlohmann::json{{"simplex", cell_to_json(dc.simplex, n)},
                                   {"cube", cell_to_json(dc.cube, n)},
                                   {"coeff", coeff}});
  }
  return nlohmann::json{{"n", n}, {"cells", std::move(cells)}};
}

DoubleChain double_chain_from_json(const nlohmann::json& j, int& n_out) {
  const int n = rank_from_json(j);
  DoubleChain out;
  for (const auto& e : j.at("cells")) {
    if (!e.is_object() || !e.contains("simplex") || !e.contains("cube"))
      throw ConfigError("product cells need \"simplex\" and \"cube\" entries");
    const DoubleCell dc{cell_from_json(e.at("simplex"), n), cell_from_json(e.at("cube"), n)};
    out[dc] += coeff_from_json(e);
  }
  remove_zeros_double(out);
  n_out = n;
  return out;
}

}  // namespace gblab::chains
