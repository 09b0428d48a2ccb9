#include "gblab/mixed_form.hpp"

#include <algorithm>
#include <cmath>

namespace gblab::forms {

int merge_sign(Mask a, Mask b) {
  int inversions = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

int insert_sign(Mask m, int j) {
  const Mask below = m & ((Mask{1} << j) - 1);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

namespace {

// Sort an index list in place; returns the permutation sign, or 0 on repeats.
int sort_indices(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
      if (v[j - 1] == v[j]) return 0;
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  return sign;
}

Mask to_mask(const std::vector<int>& v) {
  Mask m = 0;
  for (int i : v) m |= Mask{1} << i;
  return m;
}

}  // namespace

MixedForm::MixedForm(GridPtr g, int rank, int p_, int q_)
    : grid(std::move(g)), fiber_rank(rank), p(p_), q(q_) {
  if (p < 0 || q < 0) throw DegreeError("negative form degree");
}

void MixedForm::add_term(Mask base, Mask fiber, const GridFn& c, double s) {
  if (degree(base) != p || degree(fiber) != q)
    throw DegreeError("term masks do not match the form's bidegree");
  auto it = coeff.find({base, fiber});
  if (it == coeff.end()) {
    GridFn f(grid->size(), 0.0);
    grid::axpy(f, s, c);
    coeff.emplace(std::make_pair(base, fiber), std::move(f));
  } else {
    grid::axpy(it->second, s, c);
  }
}

void MixedForm::add_term_indices(std::vector<int> base, std::vector<int> fiber,
                                 const GridFn& c, double s) {
  const int sb = sort_indices(base);
  const int sf = sort_indices(fiber);
  if (sb == 0 || sf == 0) return;
  add_term(to_mask(base), to_mask(fiber), c, s * sb * sf);
}

const GridFn* MixedForm::find(Mask base, Mask fiber) const {
  auto it = coeff.find({base, fiber});
  return it == coeff.end() ? nullptr : &it->second;
}

double MixedForm::max_abs() const {
  double m = 0.0;
  for (const auto& [k, f] : coeff) m = std::max(m, grid::max_abs(f));
  return m;
}

void MixedForm::drop_zero_terms() {
  for (auto it = coeff.begin(); it != coeff.end();) {
    if (grid::max_abs(it->second) == 0.0)
      it = coeff.erase(it);
    else
      ++it;
  }
}

MixedForm scale(const MixedForm& a, double s) {
  MixedForm out(a.grid, a.fiber_rank, a.p, a.q);
  for (const auto& [k, f] : a.coeff) out.coeff[k] = grid::scaled(f, s);
  return out;
}

MixedForm add(const MixedForm& a, const MixedForm& b) {
  if (a.p != b.p || a.q != b.q) throw DegreeError("adding forms of different bidegree");
  MixedForm out = a;
  for (const auto& [k, f] : b.coeff) {
    auto it = out.coeff.find(k);
    if (it == out.coeff.end())
      out.coeff[k] = f;
    else
      grid::axpy(it->second, 1.0, f);
  }
  return out;
}

MixedForm subtract(const MixedForm& a, const MixedForm& b) {
  return add(a, scale(b, -1.0));
}

MixedForm multiply(const MixedForm& a, const GridFn& f) {
  MixedForm out(a.grid, a.fiber_rank, a.p, a.q);
  for (const auto& [k, c] : a.coeff) out.coeff[k] = grid::product(c, f);
  return out;
}

MixedForm wedge(const MixedForm& a, const MixedForm& b) {
  if (a.grid.get() != b.grid.get() || a.fiber_rank != b.fiber_rank)
    throw GridError("wedge operands live on different charts");
  MixedForm out(a.grid, a.fiber_rank, a.p + b.p, a.q + b.q);
  if (out.p > a.grid->dim() || out.q > a.fiber_rank) return out;  // identically zero
  for (const auto& [ka, fa] : a.coeff) {
    for (const auto& [kb, fb] : b.coeff) {
      if ((ka.first & kb.first) || (ka.second & kb.second)) continue;
      int s = merge_sign(ka.first, kb.first) * merge_sign(ka.second, kb.second);
      if ((b.p * a.q) % 2 != 0) s = -s;  // base of b moves past fiber of a
      out.add_term(ka.first | kb.first, ka.second | kb.second,
                   grid::product(fa, fb), s);
    }
  }
  out.drop_zero_terms();
  return out;
}

MixedForm exterior_derivative(const MixedForm& a) {
  MixedForm out(a.grid, a.fiber_rank, a.p + 1, a.q);
  if (a.p >= a.grid->dim()) return out;
  for (const auto& [k, f] : a.coeff) {
    for (int ax = 0; ax < a.grid->dim(); ++ax) {
      if (k.first & (Mask{1} << ax)) continue;
      out.add_term(k.first | (Mask{1} << ax), k.second,
                   grid::derivative(*a.grid, f, ax), insert_sign(k.first, ax));
    }
  }
  out.drop_zero_terms();
  return out;
}

MixedForm interior_product(const std::vector<GridFn>& v, const MixedForm& a) {
  if (static_cast<int>(v.size()) != a.fiber_rank)
    throw DimensionError("vector field components do not match the fiber rank");
  MixedForm out(a.grid, a.fiber_rank, a.p, a.q - 1);
  if (a.q == 0) return out;
  const int base_sign = (a.p % 2 == 0) ? 1 : -1;
  for (const auto& [k, f] : a.coeff) {
    Mask fib = k.second;
    int pos = 0;
    while (fib) {
      const int gen = std::countr_zero(fib);
      fib &= fib - 1;
      const int s = base_sign * ((pos % 2 == 0) ? 1 : -1);
      out.add_term(k.first, k.second & ~(Mask{1} << gen),
                   grid::product(v[gen], f), s);
      ++pos;
    }
  }
  out.drop_zero_terms();
  return out;
}

MixedForm supertrace(const MixedForm& a) {
  if (a.q != a.fiber_rank)
    throw DegreeError("supertrace needs full fiber degree");
  const Mask full = (Mask{1} << a.fiber_rank) - 1;
  MixedForm out(a.grid, a.fiber_rank, a.p, 0);
  for (const auto& [k, f] : a.coeff)
    if (k.second == full) out.add_term(k.first, 0, f);
  return out;
}

MixedSum supertrace_sum(const MixedSum& a) {
  MixedSum out(a.grid, a.fiber_rank);
  for (const auto& [k, f] : a.parts)
    if (k.second == a.fiber_rank) {
      MixedForm t = supertrace(f);
      if (!t.is_zero()) out.accumulate(t);
    }
  return out;
}

double integrate(const MixedForm& a, Quadrature q) {
  if (a.q != 0 || a.p != a.grid->dim())
    throw DegreeError("integration needs bidegree (chart dimension, 0)");
  const Mask full = (Mask{1} << a.grid->dim()) - 1;
  const GridFn* f = a.find(full, 0);
  if (!f) return 0.0;
  return grid::integrate(*a.grid, *f, q);
}

namespace {

// Renumber the bits of `m` after the axes in `dropped` are removed.
Mask compress_mask(Mask m, Mask dropped) {
  Mask out = 0;
  int shift = 0;
  for (int b = 0; b < 32; ++b) {
    const Mask bit = Mask{1} << b;
    if (dropped & bit) {
      ++shift;
      continue;
    }
    if (m & bit) out |= Mask{1} << (b - shift);
  }
  return out;
}

}  // namespace

MixedForm fiber_integrate(const MixedForm& a, Mask fiber_axes, Quadrature q,
                          double decay_tol,
                          const std::map<int, FiberEdgeCheck>& edges) {
  const int nf = degree(fiber_axes);
  if (nf == 0) throw GridError("fiber integration needs at least one axis");
  if (nf > a.p)
    throw DegreeError("fiber integration over more axes than the form degree");

  // Reduced chart with the fiber axes removed.
  std::vector<grid::Axis> kept;
  for (int ax = 0; ax < a.grid->dim(); ++ax)
    if (!(fiber_axes & (Mask{1} << ax))) kept.push_back(a.grid->axes[ax]);
  GridPtr reduced = grid::make_grid(std::move(kept));

  MixedForm out(reduced, a.fiber_rank, a.p - nf, a.q);
  for (const auto& [k, f] : a.coeff) {
    if ((k.first & fiber_axes) != fiber_axes) continue;  // no dt factor
    // Sign of reordering dx_{sorted} into dx_{base-first} dt_{fiber-last}:
    // move each fiber axis past the larger base axes.
    int sign = 1;
    {
      const Mask base_part = k.first & ~fiber_axes;
      Mask fa = fiber_axes;
      while (fa) {
        const int ax = std::countr_zero(fa);
        fa &= fa - 1;
        if (std::popcount(base_part >> (ax + 1)) % 2 != 0) sign = -sign;
      }
    }
    // Decay check, then contract the fiber axes one at a time (highest
    // first, so the remaining axis numbering stays valid).
    grid::ChartGrid cur = *a.grid;
    GridFn g = f;
    std::vector<int> axes_desc;
    for (int ax = a.grid->dim() - 1; ax >= 0; --ax)
      if (fiber_axes & (Mask{1} << ax)) axes_desc.push_back(ax);
    for (int ax : axes_desc) {
      FiberEdgeCheck ec;
      if (auto it = edges.find(ax); it != edges.end()) ec = it->second;
      if (ec.check_lower && grid::edge_max(cur, g, ax, true) > decay_tol)
        throw TruncationError("insufficient decay at lower truncation edge");
      if (ec.check_upper && grid::edge_max(cur, g, ax, false) > decay_tol)
        throw TruncationError("insufficient decay at upper truncation edge");
      g = grid::integrate_axis(cur, g, ax, q);
      cur = cur.without_axis(ax);
    }
    out.add_term(compress_mask(k.first & ~fiber_axes, fiber_axes), k.second, g, sign);
  }
  out.drop_zero_terms();
  return out;
}

MixedForm boundary_restrict(const MixedForm& a, int axis, bool lower) {
  GridPtr reduced = grid::make_grid(a.grid->without_axis(axis).axes);
  MixedForm out(reduced, a.fiber_rank, a.p, a.q);
  const Mask bit = Mask{1} << axis;
  const int edge = lower ? 0 : a.grid->axes[axis].res - 1;
  std::vector<int> idx(a.grid->dim());
  for (const auto& [k, f] : a.coeff) {
    if (k.first & bit) continue;  // contains the axis differential
    GridFn g(reduced->size());
    std::vector<int> ridx(reduced->dim());
    for (std::size_t rp = 0; rp < reduced->size(); ++rp) {
      reduced->unravel(rp, ridx.data());
      int w = 0;
      for (int ax = 0; ax < a.grid->dim(); ++ax)
        idx[ax] = (ax == axis) ? edge : ridx[w++];
      g[rp] = f[a.grid->ravel(idx.data())];
    }
    out.add_term(compress_mask(k.first, bit), k.second, g);
  }
  return out;
}

MixedForm promote(const MixedForm& a, GridPtr target, const std::vector<int>& axis_map) {
  MixedForm out(target, a.fiber_rank, a.p, a.q);
  // old axis -> new axis must be order preserving so masks stay canonical
  for (std::size_t i = 1; i < axis_map.size(); ++i)
    if (axis_map[i] <= axis_map[i - 1])
      throw GridError("promote needs an increasing axis map");
  std::vector<int> tidx(target->dim()), sidx(a.grid->dim());
  for (const auto& [k, f] : a.coeff) {
    Mask nb = 0;
    Mask m = k.first;
    while (m) {
      const int ax = std::countr_zero(m);
      m &= m - 1;
      nb |= Mask{1} << axis_map[ax];
    }
    GridFn g(target->size());
    for (std::size_t p = 0; p < target->size(); ++p) {
      target->unravel(p, tidx.data());
      for (int ax = 0; ax < a.grid->dim(); ++ax) sidx[ax] = tidx[axis_map[ax]];
      g[p] = f[a.grid->ravel(sidx.data())];
    }
    out.add_term(nb, k.second, g);
  }
  return out;
}

void MixedSum::accumulate(const MixedForm& f) {
  if (!grid) {
    grid = f.grid;
    fiber_rank = f.fiber_rank;
  }
  auto key = std::make_pair(f.p, f.q);
  auto it = parts.find(key);
  if (it == parts.end())
    parts.emplace(key, f);
  else
    it->second = add(it->second, f);
}

const MixedForm* MixedSum::part(int p, int q) const {
  auto it = parts.find({p, q});
  return it == parts.end() ? nullptr : &it->second;
}

MixedSum sum_add(const MixedSum& a, const MixedSum& b) {
  MixedSum out = a;
  for (const auto& [k, f] : b.parts) out.accumulate(f);
  return out;
}

MixedSum sum_scale(const MixedSum& a, double s) {
  MixedSum out(a.grid, a.fiber_rank);
  for (const auto& [k, f] : a.parts) out.accumulate(scale(f, s));
  return out;
}

MixedSum sum_wedge(const MixedSum& a, const MixedSum& b) {
  MixedSum out(a.grid, a.fiber_rank);
  const int dim = a.grid->dim();
  for (const auto& [ka, fa] : a.parts)
    for (const auto& [kb, fb] : b.parts) {
      if (ka.first + kb.first > dim || ka.second + kb.second > a.fiber_rank) continue;
      MixedForm w = wedge(fa, fb);
      if (!w.is_zero()) out.accumulate(w);
    }
  return out;
}

MixedSum exp_even(const MixedSum& x) {
  for (const auto& [k, f] : x.parts)
    if ((k.first + k.second) % 2 != 0)
      throw DegreeError("exp is only defined for even total degree");

  // Split off the commuting scalar part, which is not nilpotent.
  GridFn scalar(x.grid->size(), 0.0);
  MixedSum positive(x.grid, x.fiber_rank);
  for (const auto& [k, f] : x.parts) {
    if (k.first == 0 && k.second == 0) {
      if (const GridFn* c = f.find(0, 0)) grid::axpy(scalar, 1.0, *c);
    } else {
      positive.accumulate(f);
    }
  }

  MixedSum acc(x.grid, x.fiber_rank);
  MixedForm one(x.grid, x.fiber_rank, 0, 0);
  one.add_term(0, 0, grid::constant(*x.grid, 1.0));
  acc.accumulate(one);

  MixedSum term = acc;
  const int cap = x.grid->dim() + x.fiber_rank;
  for (int k = 1; k <= cap; ++k) {
    term = sum_scale(sum_wedge(term, positive), 1.0 / k);
    bool empty = true;
    for (const auto& [kk, f] : term.parts)
      if (!f.is_zero()) empty = false;
    if (empty) break;
    acc = sum_add(acc, term);
  }

  GridFn es(scalar.size());
  for (std::size_t i = 0; i < scalar.size(); ++i) es[i] = std::exp(scalar[i]);
  MixedSum out(x.grid, x.fiber_rank);
  for (const auto& [k, f] : acc.parts) {
    MixedForm g(f.grid, f.fiber_rank, f.p, f.q);
    for (const auto& [key, c] : f.coeff) g.coeff[key] = grid::product(c, es);
    out.accumulate(g);
  }
  return out;
}

}  // namespace gblab::forms
