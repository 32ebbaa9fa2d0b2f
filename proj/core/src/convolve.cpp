#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cellular_internal.hpp"
#include "sheafenergy/cellular.hpp"

// Convolution F * G = R s_! (F (x) G) along s(w1, w2) = w1 + w2, computed
// exactly on the product cell structure refined by the fibers of the sum
// map (diagonal lines through breakpoint sums). Inputs decompose into
// half-open interval and point pieces; each pair of pieces is pushed
// forward through the cell arrangement, with stalks cross-checked against
// 1-D fiber cohomology.

namespace sheafenergy {

using internal::approx_eq;
using internal::in_halfopen;
using internal::sorted_unique_tol;

namespace {

struct GeomPiece {
  double lo = 0.0;
  double hi = 0.0;  // exclusive; equals lo for point pieces
  bool point = false;
  int degree = 0;
  int mult = 1;
};

/// Converts a cell range into interval geometry; only half-open bars
/// (point cell through open cell) and single point cells are admissible.
GeomPiece piece_geometry(const IntervalPiece& p, const std::vector<double>& bps,
                         int degree) {
  GeomPiece gp;
  gp.degree = degree;
  gp.mult = p.multiplicity;
  const bool first_point = (p.first_cell % 2 == 1);
  const bool last_open = (p.last_cell % 2 == 0);
  if (first_point && p.first_cell == p.last_cell) {
    gp.point = true;
    gp.lo = gp.hi = bps[(p.first_cell - 1) / 2];
    return gp;
  }
  if (first_point && last_open) {
    gp.lo = bps[(p.first_cell - 1) / 2];
    gp.hi = bps[p.last_cell / 2];  // right edge of the final open cell
    return gp;
  }
  throw std::invalid_argument(
      "cellular model is not generated by half-open intervals and points");
}

std::vector<GeomPiece> geometric_pieces(const CellComplexSheaf& f) {
  std::vector<GeomPiece> out;
  for (const auto& [deg, layer] : f.layers)
    for (const IntervalPiece& p : decompose_layer(layer))
      out.push_back(piece_geometry(p, f.breakpoints, deg));
  return out;
}

// --- the 2-D arrangement for one pair of pieces ---------------------------

struct Curve {
  bool diagonal = false;
  double value = 0.0;  // y for horizontals, s for diagonals
  double height_at(double x) const { return diagonal ? value - x : value; }
};

struct ArrCell {
  int dim = 0;
  double s_rep = 0.0;
  int stalk = 0;
};

struct Arrangement {
  std::vector<double> sums;  // output breakpoints
  std::vector<ArrCell> cells;
  std::vector<std::pair<int, int>> rel;  // all order pairs (lower, upper)
  std::vector<std::vector<int>> cofaces;
};

/// Membership of a position in a piece; `exact` marks positions sitting
/// on breakpoint coordinates (as opposed to generic interior samples).
bool piece_has(const GeomPiece& p, double pos, bool exact) {
  if (p.point) return exact && approx_eq(pos, p.lo);
  return in_halfopen(pos, p.lo, p.hi);
}

Arrangement build_arrangement(const GeomPiece& pf, const GeomPiece& pg) {
  Arrangement arr;
  const double af = pf.lo, bf = pf.point ? pf.lo : pf.hi;
  const double cg = pg.lo, dg = pg.point ? pg.lo : pg.hi;

  arr.sums = sorted_unique_tol({af + cg, af + dg, bf + cg, bf + dg});

  std::vector<double> xs{af, bf};
  for (double s : arr.sums)
    for (double y : {cg, dg}) {
      const double x = s - y;
      if (x >= af - kEndpointTol && x <= bf + kEndpointTol) xs.push_back(x);
    }
  const std::vector<double> cols = sorted_unique_tol(std::move(xs));
  const int nc = static_cast<int>(cols.size());

  std::vector<std::vector<double>> heights(nc);
  for (int i = 0; i < nc; ++i) {
    std::vector<double> h{cg, dg};
    for (double s : arr.sums) {
      const double y = s - cols[i];
      if (y >= cg - kEndpointTol && y <= dg + kEndpointTol) h.push_back(y);
    }
    heights[i] = sorted_unique_tol(std::move(h));
  }

  std::vector<std::vector<Curve>> curves(std::max(0, nc - 1));
  for (int j = 0; j + 1 < nc; ++j) {
    const double midx = 0.5 * (cols[j] + cols[j + 1]);
    std::vector<Curve> cs;
    cs.push_back({false, cg});
    if (dg > cg + kEndpointTol) cs.push_back({false, dg});
    for (double s : arr.sums) {
      const double h = s - midx;
      if (h > cg + kEndpointTol && h < dg - kEndpointTol) cs.push_back({true, s});
    }
    std::sort(cs.begin(), cs.end(), [&](const Curve& a, const Curve& b) {
      return a.height_at(midx) < b.height_at(midx);
    });
    curves[j] = std::move(cs);
  }

  std::vector<std::vector<int>> vertex_id(nc), vseg_id(nc);
  std::vector<std::vector<int>> piece_id(std::max(0, nc - 1)),
      region_id(std::max(0, nc - 1));

  auto add_cell = [&](int dim, double s_rep, int stalk) {
    arr.cells.push_back({dim, s_rep, stalk});
    return static_cast<int>(arr.cells.size()) - 1;
  };

  for (int i = 0; i < nc; ++i) {
    const double x = cols[i];
    for (double h : heights[i])
      vertex_id[i].push_back(
          add_cell(0, x + h, piece_has(pf, x, true) && piece_has(pg, h, true) ? 1 : 0));
    for (size_t s = 0; s + 1 < heights[i].size(); ++s) {
      const double hm = 0.5 * (heights[i][s] + heights[i][s + 1]);
      vseg_id[i].push_back(
          add_cell(1, x + hm, piece_has(pf, x, true) && piece_has(pg, hm, false) ? 1 : 0));
    }
  }
  for (int j = 0; j + 1 < nc; ++j) {
    const double midx = 0.5 * (cols[j] + cols[j + 1]);
    for (const Curve& c : curves[j]) {
      const double h = c.height_at(midx);
      const double s_rep = c.diagonal ? c.value : midx + c.value;
      piece_id[j].push_back(add_cell(
          1, s_rep, piece_has(pf, midx, false) && piece_has(pg, h, !c.diagonal) ? 1 : 0));
    }
    for (size_t r = 0; r + 1 < curves[j].size(); ++r) {
      const double hm =
          0.5 * (curves[j][r].height_at(midx) + curves[j][r + 1].height_at(midx));
      region_id[j].push_back(add_cell(
          2, midx + hm, piece_has(pf, midx, false) && piece_has(pg, hm, false) ? 1 : 0));
    }
  }

  std::set<std::pair<int, int>> rel;
  auto relate = [&](int lo, int hi) { rel.insert({lo, hi}); };
  for (int i = 0; i < nc; ++i)
    for (size_t s = 0; s + 1 < heights[i].size(); ++s) {
      relate(vertex_id[i][s], vseg_id[i][s]);
      relate(vertex_id[i][s + 1], vseg_id[i][s]);
    }
  for (int j = 0; j + 1 < nc; ++j) {
    for (int side = 0; side < 2; ++side) {
      const int i = j + side;
      const double x = cols[i];
      for (size_t kv = 0; kv < heights[i].size(); ++kv) {
        const double h = heights[i][kv];
        for (size_t c = 0; c < curves[j].size(); ++c)
          if (approx_eq(curves[j][c].height_at(x), h))
            relate(vertex_id[i][kv], piece_id[j][c]);
        for (size_t r = 0; r + 1 < curves[j].size(); ++r) {
          const double lo = curves[j][r].height_at(x);
          const double hi = curves[j][r + 1].height_at(x);
          if (h >= lo - kEndpointTol && h <= hi + kEndpointTol)
            relate(vertex_id[i][kv], region_id[j][r]);
        }
      }
      for (size_t s = 0; s + 1 < heights[i].size(); ++s) {
        const double h1 = heights[i][s], h2 = heights[i][s + 1];
        for (size_t r = 0; r + 1 < curves[j].size(); ++r) {
          const double lo = curves[j][r].height_at(x);
          const double hi = curves[j][r + 1].height_at(x);
          if (h1 >= lo - kEndpointTol && h2 <= hi + kEndpointTol)
            relate(vseg_id[i][s], region_id[j][r]);
        }
      }
    }
    for (size_t r = 0; r + 1 < curves[j].size(); ++r) {
      relate(piece_id[j][r], region_id[j][r]);
      relate(piece_id[j][r + 1], region_id[j][r]);
    }
  }
  arr.rel.assign(rel.begin(), rel.end());
  arr.cofaces.assign(arr.cells.size(), {});
  for (const auto& [lo, hi] : arr.rel) arr.cofaces[lo].push_back(hi);
  return arr;
}

// --- derived sections over up-sets of the arrangement ---------------------

struct PosetComplex {
  std::vector<int> c0;
  std::vector<std::pair<int, int>> c1;
  std::vector<std::tuple<int, int, int>> c2;
  std::map<int, int> c0_index;
  std::map<std::pair<int, int>, int> c1_index;
  Gf2Matrix d0, d1;
};

PosetComplex build_complex(const Arrangement& arr, const std::vector<char>& in_set) {
  PosetComplex pc;
  for (int e = 0; e < static_cast<int>(arr.cells.size()); ++e)
    if (in_set[e] && arr.cells[e].stalk) {
      pc.c0_index[e] = static_cast<int>(pc.c0.size());
      pc.c0.push_back(e);
    }
  for (const auto& [e, f] : arr.rel)
    if (in_set[e] && in_set[f] && arr.cells[f].stalk) {
      pc.c1_index[{e, f}] = static_cast<int>(pc.c1.size());
      pc.c1.emplace_back(e, f);
    }
  for (const auto& [e, f] : arr.rel) {
    if (!in_set[e] || !in_set[f]) continue;
    for (int g : arr.cofaces[f])
      if (in_set[g] && arr.cells[g].stalk) pc.c2.emplace_back(e, f, g);
  }

  pc.d0 = Gf2Matrix(static_cast<int>(pc.c1.size()), static_cast<int>(pc.c0.size()));
  for (size_t r = 0; r < pc.c1.size(); ++r) {
    const auto [e, f] = pc.c1[r];
    pc.d0.flip(static_cast<int>(r), pc.c0_index.at(f));
    auto ei = pc.c0_index.find(e);
    if (ei != pc.c0_index.end()) pc.d0.flip(static_cast<int>(r), ei->second);
  }
  pc.d1 = Gf2Matrix(static_cast<int>(pc.c2.size()), static_cast<int>(pc.c1.size()));
  for (size_t r = 0; r < pc.c2.size(); ++r) {
    const auto [e, f, g] = pc.c2[r];
    pc.d1.flip(static_cast<int>(r), pc.c1_index.at({f, g}));
    auto eg = pc.c1_index.find({e, g});
    if (eg == pc.c1_index.end())
      throw std::logic_error("arrangement order relation is not transitive");
    pc.d1.flip(static_cast<int>(r), eg->second);
    if (arr.cells[f].stalk) {
      auto ef = pc.c1_index.find({e, f});
      if (ef == pc.c1_index.end())
        throw std::logic_error("arrangement order relation is not transitive");
      pc.d1.flip(static_cast<int>(r), ef->second);
    }
  }
  return pc;
}

struct SectionDims {
  int h0 = 0, h1 = 0, h2 = 0;
};

SectionDims complex_dims(const PosetComplex& pc) {
  const int r0 = pc.d0.rank();
  const int r1 = pc.d1.rank();
  SectionDims d;
  d.h0 = static_cast<int>(pc.c0.size()) - r0;
  d.h1 = static_cast<int>(pc.c1.size()) - r1 - r0;
  d.h2 = static_cast<int>(pc.c2.size()) - r1;
  if (d.h0 < 0 || d.h1 < 0 || d.h2 < 0)
    throw std::logic_error("section complex has inconsistent ranks");
  return d;
}

/// Rank of the map induced on H^k by restricting sections from src to a
/// smaller up-set tgt.
int restriction_rank(const PosetComplex& src, const PosetComplex& tgt, int k) {
  if (k == 0) {
    const Gf2Matrix z = src.d0.kernel_basis();
    if (z.rows() == 0 || tgt.c0.empty()) return 0;
    Gf2Matrix img(static_cast<int>(tgt.c0.size()), z.rows());
    for (int v = 0; v < z.rows(); ++v)
      for (size_t c = 0; c < src.c0.size(); ++c)
        if (z.get(v, static_cast<int>(c))) {
          auto it = tgt.c0_index.find(src.c0[c]);
          if (it != tgt.c0_index.end()) img.flip(it->second, v);
        }
    return img.rank();
  }
  if (k == 1) {
    const Gf2Matrix z = src.d1.kernel_basis();
    if (z.rows() == 0 || tgt.c1.empty()) return 0;
    Gf2Matrix img(static_cast<int>(tgt.c1.size()), z.rows());
    for (int v = 0; v < z.rows(); ++v)
      for (size_t c = 0; c < src.c1.size(); ++c)
        if (z.get(v, static_cast<int>(c))) {
          auto it = tgt.c1_index.find(src.c1[c]);
          if (it != tgt.c1_index.end()) img.flip(it->second, v);
        }
    return rank_modulo(img, tgt.d0);
  }
  throw std::logic_error("restriction_rank supports degrees 0 and 1");
}

/// Pushes one pair of pieces forward along the sum map.
std::vector<Bar> convolve_pair(const GeomPiece& pf, const GeomPiece& pg) {
  const Arrangement arr = build_arrangement(pf, pg);
  const int ns = static_cast<int>(arr.sums.size());

  auto select = [&](double lo, double hi) {
    std::vector<char> in(arr.cells.size(), 0);
    for (size_t e = 0; e < arr.cells.size(); ++e)
      in[e] = (arr.cells[e].s_rep > lo + kEndpointTol &&
               arr.cells[e].s_rep < hi - kEndpointTol)
                  ? 1
                  : 0;
    return in;
  };
  const double below = arr.sums.front() - 1.0;
  const double above = arr.sums.back() + 1.0;

  std::vector<PosetComplex> point_cx(ns), open_cx(std::max(0, ns - 1));
  std::vector<SectionDims> point_dims(ns), open_dims(std::max(0, ns - 1));
  for (int i = 0; i < ns; ++i) {
    const double lo = (i == 0) ? below : arr.sums[i - 1];
    const double hi = (i + 1 == ns) ? above : arr.sums[i + 1];
    point_cx[i] = build_complex(arr, select(lo, hi));
    point_dims[i] = complex_dims(point_cx[i]);
    if (point_dims[i].h2 != 0)
      throw std::logic_error("unexpected degree-2 sections in the pushforward");
  }
  for (int i = 0; i + 1 < ns; ++i) {
    open_cx[i] = build_complex(arr, select(arr.sums[i], arr.sums[i + 1]));
    open_dims[i] = complex_dims(open_cx[i]);
    if (open_dims[i].h2 != 0)
      throw std::logic_error("unexpected degree-2 sections in the pushforward");
  }

  // Independent stalk cross-check: 1-D compactly supported cohomology of
  // the sum-map fibers.
  {
    const double wlo = pf.lo - 1.0;
    const double whi = (pf.point ? pf.lo : pf.hi) + 1.0;
    const CellComplexSheaf single =
        pf.point ? make_cellular_point(pf.lo, wlo, whi, 0, 1)
                 : build_cellular(Barcode::single(pf.lo, pf.hi, 0, 1), wlo, whi);
    auto check = [&](double z, const SectionDims& d) {
      const auto dims = internal::pushforward_stalk_dims(
          single, single.layers.at(0), 0, z, pg.lo, pg.point ? pg.lo : pg.hi, pg.point);
      const int h0 = dims.count(0) ? dims.at(0) : 0;
      const int h1 = dims.count(1) ? dims.at(1) : 0;
      if (h0 != d.h0 || h1 != d.h1)
        throw std::logic_error("strip sections disagree with fiber cohomology");
    };
    for (int i = 0; i < ns; ++i) check(arr.sums[i], point_dims[i]);
    for (int i = 0; i + 1 < ns; ++i)
      check(0.5 * (arr.sums[i] + arr.sums[i + 1]), open_dims[i]);
  }

  // Assemble the output zigzag per fiber degree and decompose it.
  std::vector<Bar> out;
  for (int k = 0; k <= 1; ++k) {
    auto pdim = [&](int i) { return k == 0 ? point_dims[i].h0 : point_dims[i].h1; };
    auto odim = [&](int i) { return k == 0 ? open_dims[i].h0 : open_dims[i].h1; };

    ZigzagLayer zl;
    zl.dims.assign(2 * ns + 1, 0);
    for (int i = 0; i < ns; ++i) {
      if (pdim(i) > 1)
        throw std::logic_error("pair pushforward produced a stalk of dimension > 1");
      zl.dims[2 * i + 1] = pdim(i);
    }
    for (int i = 0; i + 1 < ns; ++i) {
      if (odim(i) > 1)
        throw std::logic_error("pair pushforward produced a stalk of dimension > 1");
      zl.dims[2 * i + 2] = odim(i);
    }
    for (int i = 0; i < ns; ++i) {
      Gf2Matrix left(zl.dims[2 * i], zl.dims[2 * i + 1]);
      Gf2Matrix right(zl.dims[2 * i + 2], zl.dims[2 * i + 1]);
      if (left.rows() == 1 && left.cols() == 1 &&
          restriction_rank(point_cx[i], open_cx[i - 1], k) == 1)
        left.set(0, 0, true);
      if (right.rows() == 1 && right.cols() == 1 &&
          restriction_rank(point_cx[i], open_cx[i], k) == 1)
        right.set(0, 0, true);
      zl.gen_left.push_back(std::move(left));
      zl.gen_right.push_back(std::move(right));
    }

    for (const IntervalPiece& p : decompose_layer(zl)) {
      const GeomPiece gp = piece_geometry(p, arr.sums, pf.degree + pg.degree + k);
      if (gp.point)
        throw std::invalid_argument(
            "convolution produced a point class not representable as a barcode");
      out.push_back(
          Bar(gp.lo, gp.hi, gp.degree, gp.mult * pf.mult * pg.mult));
    }
  }
  return out;
}

}  // namespace

Barcode oracle_convolve(const CellComplexSheaf& f, const CellComplexSheaf& g) {
  f.validate();
  g.validate();
  const std::vector<GeomPiece> fp = geometric_pieces(f);
  const std::vector<GeomPiece> gp = geometric_pieces(g);
  std::vector<Bar> bars;
  for (const GeomPiece& a : fp)
    for (const GeomPiece& b : gp) {
      if (a.point && b.point)
        throw std::invalid_argument(
            "convolution of two point classes is not representable as a barcode");
      const std::vector<Bar> part = convolve_pair(a, b);
      bars.insert(bars.end(), part.begin(), part.end());
    }
  return Barcode(std::move(bars));
}

}  // namespace sheafenergy
