#include "sheafenergy/cellular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cellular_internal.hpp"

namespace sheafenergy {

namespace internal {

bool approx_eq(double x, double y) { return std::abs(x - y) <= kEndpointTol; }

std::vector<double> sorted_unique_tol(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kEndpointTol) out.push_back(x);
  return out;
}

int find_breakpoint(const std::vector<double>& bps, double x) {
  auto it = std::lower_bound(bps.begin(), bps.end(), x - kEndpointTol);
  if (it != bps.end() && approx_eq(*it, x)) return static_cast<int>(it - bps.begin());
  return -1;
}

int cell_of(const std::vector<double>& bps, double x, bool at_point) {
  const int k = find_breakpoint(bps, x);
  if (k >= 0 && at_point) return 2 * k + 1;
  int open = 0;
  for (size_t i = 0; i < bps.size(); ++i)
    if (bps[i] < x) open = static_cast<int>(i) + 1;
  return 2 * open;
}

bool in_halfopen(double x, double lo, double hi) {
  return x >= lo - kEndpointTol && x < hi - kEndpointTol;
}

Gf2Matrix gf2_identity(int n) {
  Gf2Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

}  // namespace internal

using internal::approx_eq;
using internal::cell_of;
using internal::find_breakpoint;
using internal::gf2_identity;
using internal::in_halfopen;
using internal::sorted_unique_tol;

void CellComplexSheaf::validate() const {
  if (!(window_lo < window_hi)) throw std::invalid_argument("cellular window is empty");
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] - breakpoints[i - 1] > kEndpointTol))
      throw std::invalid_argument("cellular breakpoints must be strictly increasing");
  const int cells = cell_count();
  for (const auto& [deg, layer] : layers) {
    (void)deg;
    if (static_cast<int>(layer.dims.size()) != cells)
      throw std::invalid_argument("layer dimension vector does not match cells");
    if (layer.dims.front() != 0 || layer.dims.back() != 0)
      throw std::invalid_argument("cellular model must have bounded support");
    const int k = static_cast<int>(breakpoints.size());
    if (static_cast<int>(layer.gen_left.size()) != k ||
        static_cast<int>(layer.gen_right.size()) != k)
      throw std::invalid_argument("layer generization count does not match breakpoints");
    for (int i = 0; i < k; ++i) {
      const int p = 2 * i + 1;
      if (layer.gen_left[i].rows() != layer.dims[p - 1] ||
          layer.gen_left[i].cols() != layer.dims[p] ||
          layer.gen_right[i].rows() != layer.dims[p + 1] ||
          layer.gen_right[i].cols() != layer.dims[p])
        throw std::invalid_argument("generization map has inconsistent dimensions");
    }
  }
}

int CellComplexSheaf::stalk_dim(int degree, double position, bool at_point) const {
  auto it = layers.find(degree);
  if (it == layers.end()) return 0;
  return it->second.dims[cell_of(breakpoints, position, at_point)];
}

CellComplexSheaf build_cellular(const Barcode& f, double window_lo, double window_hi) {
  if (!(window_lo < window_hi)) throw std::invalid_argument("cellular window is empty");
  CellComplexSheaf out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;

  std::vector<double> bps;
  for (const Bar& b : f.bars()) {
    if (b.birth < window_lo - kEndpointTol || b.birth > window_hi + kEndpointTol)
      throw std::invalid_argument("bar endpoint outside the cellular window");
    bps.push_back(b.birth);
    if (b.is_ray()) {
      out.clipped = true;
      bps.push_back(window_hi);
    } else {
      if (b.death < window_lo - kEndpointTol || b.death > window_hi + kEndpointTol)
        throw std::invalid_argument("bar endpoint outside the cellular window");
      bps.push_back(b.death);
    }
  }
  out.breakpoints = sorted_unique_tol(std::move(bps));
  const int cells = out.cell_count();
  const int k = static_cast<int>(out.breakpoints.size());

  // Expand the bars of each degree into unit slots, record which slot
  // covers which cell, and wire generization matrices through shared
  // slots.
  std::map<int, std::vector<std::pair<double, double>>> slots;  // degree -> [b, d_eff)
  for (const Bar& b : f.bars()) {
    const double death = b.is_ray() ? window_hi : b.death;
    for (int m = 0; m < b.multiplicity; ++m) slots[b.degree].emplace_back(b.birth, death);
  }

  for (const auto& [deg, deg_slots] : slots) {
    ZigzagLayer layer;
    layer.dims.assign(cells, 0);
    std::vector<std::vector<int>> cell_slots(cells);
    for (int s = 0; s < static_cast<int>(deg_slots.size()); ++s) {
      const auto [b, d] = deg_slots[s];
      for (int c = 0; c < cells; ++c) {
        bool covered = false;
        if (c % 2 == 1) {
          covered = in_halfopen(out.breakpoints[(c - 1) / 2], b, d);
        } else if (c > 0 && c < cells - 1) {
          const double l = out.breakpoints[c / 2 - 1];
          const double r = out.breakpoints[c / 2];
          covered = l >= b - kEndpointTol && r <= d + kEndpointTol;
        }
        if (covered) {
          cell_slots[c].push_back(s);
          ++layer.dims[c];
        }
      }
    }
    auto slot_row = [&](int cell, int slot) {
      const auto& v = cell_slots[cell];
      auto it = std::find(v.begin(), v.end(), slot);
      return it == v.end() ? -1 : static_cast<int>(it - v.begin());
    };
    for (int i = 0; i < k; ++i) {
      const int p = 2 * i + 1;
      Gf2Matrix left(layer.dims[p - 1], layer.dims[p]);
      Gf2Matrix right(layer.dims[p + 1], layer.dims[p]);
      for (int col = 0; col < layer.dims[p]; ++col) {
        const int slot = cell_slots[p][col];
        const int rl = slot_row(p - 1, slot);
        const int rr = slot_row(p + 1, slot);
        if (rl >= 0) left.set(rl, col, true);
        if (rr >= 0) right.set(rr, col, true);
      }
      layer.gen_left.push_back(std::move(left));
      layer.gen_right.push_back(std::move(right));
    }
    out.layers[deg] = std::move(layer);
  }
  out.validate();
  return out;
}

CellComplexSheaf make_cellular_point(double x, double window_lo, double window_hi,
                                     int degree, int mult) {
  if (x < window_lo - kEndpointTol || x > window_hi + kEndpointTol)
    throw std::invalid_argument("point outside the cellular window");
  if (mult < 1) throw std::invalid_argument("multiplicity must be >= 1");
  CellComplexSheaf out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;
  out.breakpoints = {x};
  ZigzagLayer layer;
  layer.dims = {0, mult, 0};
  layer.gen_left.push_back(Gf2Matrix(0, mult));
  layer.gen_right.push_back(Gf2Matrix(0, mult));
  out.layers[degree] = std::move(layer);
  out.validate();
  return out;
}

namespace {

/// Refines a model onto a superset of its breakpoints.
CellComplexSheaf refine_model(const CellComplexSheaf& f, const std::vector<double>& bps) {
  CellComplexSheaf out;
  out.window_lo = f.window_lo;
  out.window_hi = f.window_hi;
  out.clipped = f.clipped;
  out.breakpoints = bps;
  const int cells = out.cell_count();
  const int k = static_cast<int>(bps.size());
  for (const auto& [deg, layer] : f.layers) {
    ZigzagLayer nl;
    nl.dims.assign(cells, 0);
    for (int c = 0; c < cells; ++c) {
      double rep;
      const bool at_point = (c % 2 == 1);
      if (at_point)
        rep = bps[(c - 1) / 2];
      else if (c == 0)
        rep = bps.front() - 1.0;
      else if (c == cells - 1)
        rep = bps.back() + 1.0;
      else
        rep = 0.5 * (bps[c / 2 - 1] + bps[c / 2]);
      nl.dims[c] = layer.dims[cell_of(f.breakpoints, rep, at_point)];
    }
    for (int i = 0; i < k; ++i) {
      const int old_bp = find_breakpoint(f.breakpoints, bps[i]);
      if (old_bp >= 0) {
        nl.gen_left.push_back(layer.gen_left[old_bp]);
        nl.gen_right.push_back(layer.gen_right[old_bp]);
      } else {
        nl.gen_left.push_back(gf2_identity(nl.dims[2 * i + 1]));
        nl.gen_right.push_back(gf2_identity(nl.dims[2 * i + 1]));
      }
    }
    out.layers[deg] = std::move(nl);
  }
  out.validate();
  return out;
}

}  // namespace

HomDims oracle_hom(const CellComplexSheaf& f, const CellComplexSheaf& g) {
  f.validate();
  g.validate();
  if (!approx_eq(f.window_lo, g.window_lo) || !approx_eq(f.window_hi, g.window_hi))
    throw std::invalid_argument("oracle_hom requires a shared window");

  std::vector<double> bps = f.breakpoints;
  bps.insert(bps.end(), g.breakpoints.begin(), g.breakpoints.end());
  bps = sorted_unique_tol(std::move(bps));
  const CellComplexSheaf rf = refine_model(f, bps);
  const CellComplexSheaf rg = refine_model(g, bps);
  const int k = static_cast<int>(bps.size());

  HomDims out;
  for (const auto& [df, lf] : rf.layers) {
    for (const auto& [dg, lg] : rg.layers) {
      // Two-term hom complex: (+)_e Hom(M_e, N_e) -> (+)_arrows Hom(M_p, N_u),
      // phi |-> N_a phi_p - phi_u M_a. H^0 = Hom, H^1 = Ext^1.
      std::vector<int> cell_off(lf.dims.size() + 1, 0);
      for (size_t c = 0; c < lf.dims.size(); ++c)
        cell_off[c + 1] = cell_off[c] + lf.dims[c] * lg.dims[c];
      const int d0 = cell_off.back();

      struct Arrow {
        int p, u;
        const Gf2Matrix *mf, *mg;
      };
      std::vector<Arrow> arrows;
      for (int i = 0; i < k; ++i) {
        const int p = 2 * i + 1;
        arrows.push_back({p, p - 1, &lf.gen_left[i], &lg.gen_left[i]});
        arrows.push_back({p, p + 1, &lf.gen_right[i], &lg.gen_right[i]});
      }
      std::vector<int> arrow_off(arrows.size() + 1, 0);
      for (size_t a = 0; a < arrows.size(); ++a)
        arrow_off[a + 1] = arrow_off[a] + lf.dims[arrows[a].p] * lg.dims[arrows[a].u];
      const int d1 = arrow_off.back();

      if (d0 == 0 && d1 == 0) continue;
      Gf2Matrix diff(d1, d0);
      for (size_t a = 0; a < arrows.size(); ++a) {
        const auto& ar = arrows[a];
        const int mp = lf.dims[ar.p], nu = lg.dims[ar.u];
        const int mu = lf.dims[ar.u], np = lg.dims[ar.p];
        for (int i = 0; i < nu; ++i)
          for (int j = 0; j < mp; ++j) {
            const int row = arrow_off[a] + i * mp + j;
            // (N_a phi_p)_{ij} picks phi_p entries (kk, j)
            for (int kk = 0; kk < np; ++kk)
              if (ar.mg->get(i, kk)) diff.flip(row, cell_off[ar.p] + kk * mp + j);
            // (phi_u M_a)_{ij} picks phi_u entries (i, kk)
            for (int kk = 0; kk < mu; ++kk)
              if (ar.mf->get(kk, j)) diff.flip(row, cell_off[ar.u] + i * mu + kk);
          }
      }
      const int rank = diff.rank();
      const int h0 = d0 - rank;
      const int h1 = d1 - rank;
      if (h0 > 0) out[dg - df] += h0;
      if (h1 > 0) out[dg - df + 1] += h1;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

std::vector<IntervalPiece> decompose_layer(const ZigzagLayer& layer) {
  const int m = static_cast<int>(layer.dims.size());
  const int nbp = (m - 1) / 2;

  // Generalized rank of the canonical map lim -> colim over cells [i, j];
  // for interval-decomposable layers this counts the summands containing
  // the window.
  auto gen_rank = [&](int i, int j) -> int {
    if (i < 0 || j >= m || i > j) return 0;
    std::vector<int> off(m + 1, 0);
    for (int c = 0; c < m; ++c)
      off[c + 1] = off[c] + (c >= i && c <= j ? layer.dims[c] : 0);
    const int total = off.back();
    if (total == 0) return 0;

    struct Arrow {
      int p, u;
      const Gf2Matrix* map;
    };
    std::vector<Arrow> arrows;
    for (int bp = 0; bp < nbp; ++bp) {
      const int p = 2 * bp + 1;
      if (p < i || p > j) continue;
      if (p - 1 >= i) arrows.push_back({p, p - 1, &layer.gen_left[bp]});
      if (p + 1 <= j) arrows.push_back({p, p + 1, &layer.gen_right[bp]});
    }

    int a_rows = 0, b_cols = 0;
    for (const Arrow& a : arrows) {
      a_rows += layer.dims[a.u];
      b_cols += layer.dims[a.p];
    }
    // lim = ker A where A(m)_a = M_a m_p - m_u;
    // colim = coker B where B(x)_a = incl_u(M_a x) - incl_p(x).
    Gf2Matrix A(a_rows, total);
    Gf2Matrix B(total, b_cols);
    int ar = 0, bc = 0;
    for (const Arrow& a : arrows) {
      const int dp = layer.dims[a.p], du = layer.dims[a.u];
      for (int r = 0; r < du; ++r) {
        for (int c = 0; c < dp; ++c)
          if (a.map->get(r, c)) A.flip(ar + r, off[a.p] + c);
        A.flip(ar + r, off[a.u] + r);
      }
      for (int c = 0; c < dp; ++c) {
        for (int r = 0; r < du; ++r)
          if (a.map->get(r, c)) B.flip(off[a.u] + r, bc + c);
        B.flip(off[a.p] + c, bc + c);
      }
      ar += du;
      bc += dp;
    }
    const Gf2Matrix lim_basis = A.kernel_basis();
    if (lim_basis.rows() == 0) return 0;
    // Canonical map lim -> colim through one component; the limit
    // constraints make every choice of component agree, and summing the
    // components instead would cancel in pairs over GF(2).
    int pivot = -1;
    for (int c = i; c <= j; ++c)
      if (layer.dims[c] > 0) { pivot = c; break; }
    if (pivot < 0) return 0;
    Gf2Matrix image(total, lim_basis.rows());
    for (int v = 0; v < lim_basis.rows(); ++v)
      for (int t = 0; t < layer.dims[pivot]; ++t)
        if (lim_basis.get(v, off[pivot] + t)) image.flip(off[pivot] + t, v);
    return rank_modulo(image, B);
  };

  std::vector<std::vector<int>> r(m, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) r[i][j] = gen_rank(i, j);
  auto rank_at = [&](int i, int j) -> int {
    if (i < 0 || j >= m || i > j) return 0;
    return r[i][j];
  };

  std::vector<IntervalPiece> pieces;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const int mu = rank_at(i, j) - rank_at(i - 1, j) - rank_at(i, j + 1) +
                     rank_at(i - 1, j + 1);
      if (mu < 0) throw std::logic_error("negative interval multiplicity in decomposition");
      if (mu > 0) pieces.push_back({i, j, mu});
    }

  std::vector<int> check(m, 0);
  for (const IntervalPiece& p : pieces)
    for (int c = p.first_cell; c <= p.last_cell; ++c) check[c] += p.multiplicity;
  for (int c = 0; c < m; ++c)
    if (check[c] != layer.dims[c])
      throw std::logic_error("interval decomposition does not reproduce stalk dimensions");
  return pieces;
}

// ---------------------------------------------------------------------------
// Fiber complexes of the sum map.

namespace internal {

FiberComplex build_fiber(const CellComplexSheaf& f, const ZigzagLayer& layer, double z,
                         double jb, double jd, bool j_point,
                         const std::vector<double>& extra) {
  FiberComplex out;
  std::vector<double> bps = f.breakpoints;
  for (double e : extra) bps.push_back(e);
  out.w_bps = sorted_unique_tol(std::move(bps));
  const int np = static_cast<int>(out.w_bps.size());

  auto f_dim = [&](double w, bool at_point) {
    return layer.dims[cell_of(f.breakpoints, w, at_point)];
  };
  auto j_has = [&](double w, bool exact) {
    if (j_point) return exact && approx_eq(z - w, jb);
    return in_halfopen(z - w, jb, jd);
  };
  auto open_rep = [&](int i) {
    if (i == 0) return out.w_bps.front() - 1.0;
    if (i == np) return out.w_bps.back() + 1.0;
    return 0.5 * (out.w_bps[i - 1] + out.w_bps[i]);
  };

  out.point_dims.resize(np);
  for (int i = 0; i < np; ++i)
    out.point_dims[i] = j_has(out.w_bps[i], true) ? f_dim(out.w_bps[i], true) : 0;
  out.open_dims.resize(np + 1);
  for (int i = 0; i <= np; ++i)
    out.open_dims[i] = j_has(open_rep(i), false) ? f_dim(open_rep(i), false) : 0;
  if (out.open_dims.front() != 0 || out.open_dims.back() != 0)
    throw std::logic_error("fiber support is unbounded");

  out.point_off.assign(np + 1, 0);
  for (int i = 0; i < np; ++i) out.point_off[i + 1] = out.point_off[i] + out.point_dims[i];
  out.open_off.assign(np + 2, 0);
  for (int i = 0; i <= np; ++i) out.open_off[i + 1] = out.open_off[i] + out.open_dims[i];

  out.delta = Gf2Matrix(out.open_off.back(), out.point_off.back());
  for (int i = 0; i < np; ++i) {
    if (out.point_dims[i] == 0) continue;
    const double w = out.w_bps[i];
    const int old_bp = find_breakpoint(f.breakpoints, w);
    for (int side = 0; side < 2; ++side) {
      const int open_idx = i + side;
      if (out.open_dims[open_idx] == 0) continue;
      Gf2Matrix gen = gf2_identity(out.point_dims[i]);
      if (old_bp >= 0) gen = (side == 0) ? layer.gen_left[old_bp] : layer.gen_right[old_bp];
      for (int r = 0; r < gen.rows(); ++r)
        for (int c = 0; c < gen.cols(); ++c)
          if (gen.get(r, c))
            out.delta.set(out.open_off[open_idx] + r, out.point_off[i] + c, true);
    }
  }
  return out;
}

std::map<int, int> pushforward_stalk_dims(const CellComplexSheaf& f,
                                          const ZigzagLayer& layer, int layer_degree,
                                          double z, double jb, double jd, bool j_point) {
  const std::vector<double> extra{z - jb, z - jd};
  const FiberComplex fc = build_fiber(f, layer, z, jb, jd, j_point, extra);
  std::map<int, int> out;
  if (fc.h0() > 0) out[layer_degree] += fc.h0();
  if (fc.h1() > 0) out[layer_degree + 1] += fc.h1();
  return out;
}

}  // namespace internal

namespace {

/// Cell components of the map induced by the canonical morphism
/// k_{[jb,jd)} -> k_{[kb,kd)} (identity on the overlap), between two fiber
/// complexes sharing a breakpoint set.
struct FiberChainMap {
  Gf2Matrix points;
  Gf2Matrix opens;
};

FiberChainMap fiber_morphism(const internal::FiberComplex& src,
                             const internal::FiberComplex& tgt, double z, double kb,
                             double kd) {
  if (src.w_bps.size() != tgt.w_bps.size())
    throw std::logic_error("fiber morphism requires a shared refinement");
  FiberChainMap out;
  const int np = static_cast<int>(src.w_bps.size());
  out.points = Gf2Matrix(tgt.point_off.back(), src.point_off.back());
  out.opens = Gf2Matrix(tgt.open_off.back(), src.open_off.back());
  auto open_rep = [&](int i) {
    if (i == 0) return src.w_bps.front() - 1.0;
    if (i == np) return src.w_bps.back() + 1.0;
    return 0.5 * (src.w_bps[i - 1] + src.w_bps[i]);
  };
  for (int i = 0; i < np; ++i) {
    const int d = std::min(src.point_dims[i], tgt.point_dims[i]);
    if (d > 0 && in_halfopen(z - src.w_bps[i], kb, kd))
      for (int r = 0; r < d; ++r)
        out.points.set(tgt.point_off[i] + r, src.point_off[i] + r, true);
  }
  for (int i = 0; i <= np; ++i) {
    const int d = std::min(src.open_dims[i], tgt.open_dims[i]);
    if (d > 0 && in_halfopen(z - open_rep(i), kb, kd))
      for (int r = 0; r < d; ++r)
        out.opens.set(tgt.open_off[i] + r, src.open_off[i] + r, true);
  }
  // A sheaf morphism must commute with the differentials.
  Gf2Matrix lhs = out.opens.multiply(src.delta);
  Gf2Matrix rhs = tgt.delta.multiply(out.points);
  lhs = lhs.augment(rhs);
  for (int r = 0; r < lhs.rows(); ++r)
    for (int c = 0; c < rhs.cols(); ++c)
      if (lhs.get(r, c) != lhs.get(r, rhs.cols() + c))
        throw std::logic_error("fiber morphism fails to commute with generization");
  return out;
}

int h0_map_rank(const internal::FiberComplex& src, const FiberChainMap& map) {
  const Gf2Matrix ker = src.delta.kernel_basis();
  if (ker.rows() == 0) return 0;
  return map.points.multiply(ker.transposed()).rank();
}

int h1_map_rank(const internal::FiberComplex& tgt, const FiberChainMap& map) {
  if (map.opens.cols() == 0) return 0;
  return rank_modulo(map.opens, tgt.delta);
}

}  // namespace

int oracle_tau(const CellComplexSheaf& f, double c) {
  f.validate();
  if (c < 0) throw std::invalid_argument("oracle_tau requires c >= 0");
  if (f.breakpoints.empty() || f.layers.empty()) return 0;
  // The translate of the (unclipped) support must stay inside the window;
  // a clip breakpoint sits at the window edge by construction and is
  // covered by the window-stability doctrine instead.
  double support_max = f.window_lo;
  bool bounded = false;
  for (double bp : f.breakpoints)
    if (!f.clipped || bp < f.window_hi - kEndpointTol) {
      support_max = bp;
      bounded = true;
    }
  if (bounded && support_max + c > f.window_hi + kEndpointTol)
    throw std::invalid_argument("window overflow: the translate escapes the window");

  const double ray_len = (f.window_hi - f.window_lo) + c + 1.0;

  std::vector<double> s_vals;
  for (double bp : f.breakpoints) {
    s_vals.push_back(bp);
    s_vals.push_back(bp + c);
    s_vals.push_back(bp + ray_len);
    s_vals.push_back(bp + c + ray_len);
  }
  s_vals = sorted_unique_tol(std::move(s_vals));
  std::vector<double> scan;
  for (size_t i = 0; i < s_vals.size(); ++i) {
    scan.push_back(s_vals[i]);
    if (i + 1 < s_vals.size()) scan.push_back(0.5 * (s_vals[i] + s_vals[i + 1]));
  }
  // Stalks past the window edge are artifacts of the clipped ray models.
  std::erase_if(scan, [&](double z) { return z > f.window_hi + kEndpointTol; });

  int best = 0;
  for (double z : scan) {
    int rank0 = 0;
    for (const auto& [deg, layer] : f.layers) {
      const int k_needed = -deg;  // output degree 0 = layer degree + fiber degree
      if (k_needed != 0 && k_needed != 1) continue;
      const std::vector<double> extra{z, z - c, z - ray_len, z - c - ray_len};
      const internal::FiberComplex src =
          internal::build_fiber(f, layer, z, 0.0, ray_len, false, extra);
      const internal::FiberComplex tgt =
          internal::build_fiber(f, layer, z, c, c + ray_len, false, extra);
      const FiberChainMap map = fiber_morphism(src, tgt, z, c, c + ray_len);
      rank0 += (k_needed == 0) ? h0_map_rank(src, map) : h1_map_rank(tgt, map);
    }
    best = std::max(best, rank0);
  }
  return best;
}

}  // namespace sheafenergy
