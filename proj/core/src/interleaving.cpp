#include "sheafenergy/interleaving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sheafenergy/gf2.hpp"

namespace sheafenergy {

namespace {

bool approx_le(double x, double y) { return x <= y + kEndpointTol; }
bool approx_lt(double x, double y) { return x < y - kEndpointTol; }

/// Degree-blind interval rule for the degree-(dJ-dI) hom generator.
bool interval_hom0(const Bar& i, const Bar& j) {
  return approx_le(i.birth, j.birth) && approx_lt(j.birth, i.death) &&
         approx_le(i.death, j.death);
}

/// Degree-blind interval rule for the degree-(dJ-dI+1) extension class.
bool interval_ext1(const Bar& i, const Bar& j) {
  return approx_lt(j.birth, i.birth) && approx_le(i.birth, j.death) &&
         approx_lt(j.death, i.death);
}

std::vector<Bar> expand_slots(const Barcode& f) {
  std::vector<Bar> slots;
  for (const Bar& b : f.bars())
    for (int m = 0; m < b.multiplicity; ++m) {
      Bar s = b;
      s.multiplicity = 1;
      slots.push_back(s);
    }
  return slots;
}

bool needs_cover(const Bar& i, double c) {
  return i.is_ray() || i.length() > c + kEndpointTol;
}

/// Existence of the canonical generators I -> T_a J -> T_{a+b} I' with the
/// middle object J translated by a.
bool cover_first_leg(const Bar& i, const Bar& j, double a) {
  if (i.degree != j.degree) return false;
  return approx_le(i.birth, j.birth + a) && approx_lt(j.birth + a, i.death) &&
         approx_le(i.death, j.death + a);
}

bool cover_second_leg(const Bar& j, const Bar& i, double a, double b) {
  if (i.degree != j.degree) return false;
  return approx_le(j.birth + a, i.birth + a + b) &&
         approx_lt(i.birth + a + b, j.death + a) &&
         approx_le(j.death + a, i.death + a + b);
}

bool covers(const Bar& i, const Bar& j, double a, double b) {
  return cover_first_leg(i, j, a) && cover_second_leg(j, i, a, b);
}

/// Composite of canonical generators gen(I -> T_a J) and
/// gen(T_a J -> T_{a+b} I') is nonzero iff the two overlap windows meet.
bool composite_nonzero(const Bar& i, const Bar& j, const Bar& i2, double a, double b) {
  if (!cover_first_leg(i, j, a)) return false;
  if (!cover_second_leg(j, i2, a, b)) return false;
  return approx_lt(i2.birth + a + b, i.death);
}

bool kuhn_augment(int u, const std::vector<std::vector<int>>& adj,
                  std::vector<int>& match_right, std::vector<char>& used) {
  for (int v : adj[u]) {
    if (used[v]) continue;
    used[v] = 1;
    if (match_right[v] < 0 || kuhn_augment(match_right[v], adj, match_right, used)) {
      match_right[v] = u;
      return true;
    }
  }
  return false;
}

}  // namespace

Barcode translate(const Barcode& f, double c) {
  std::vector<Bar> out;
  out.reserve(f.bars().size());
  for (const Bar& b : f.bars()) {
    Bar t = b;
    t.birth = b.birth + c;
    t.death = b.is_ray() ? kInf : b.death + c;
    t.birth_exact.reset();
    t.death_exact.reset();
    out.push_back(t);
  }
  return Barcode(std::move(out));
}

bool tau_is_zero(const Barcode& f, double c) {
  if (c < 0) throw std::invalid_argument("tau_is_zero requires c >= 0");
  for (const Bar& b : f.bars())
    if (needs_cover(b, c)) return false;
  return true;
}

HomDims hom_dims(const Bar& i, const Bar& j) {
  HomDims out;
  const int mult = i.multiplicity * j.multiplicity;
  if (interval_hom0(i, j)) out[j.degree - i.degree] += mult;
  if (interval_ext1(i, j)) out[j.degree - i.degree + 1] += mult;
  return out;
}

namespace detail {

bool factorization_feasible(const Barcode& f, const Barcode& g, double a, double b,
                            FactorizationWitness* witness) {
  const std::vector<Bar> fs = expand_slots(f);
  const std::vector<Bar> gs = expand_slots(g);
  const double c = a + b;

  std::vector<int> need;
  for (int i = 0; i < static_cast<int>(fs.size()); ++i)
    if (needs_cover(fs[i], c)) need.push_back(i);
  if (need.empty()) {
    if (witness) *witness = FactorizationWitness{};  // zero morphisms suffice
    return true;
  }

  std::vector<std::vector<int>> adj(need.size());
  for (size_t u = 0; u < need.size(); ++u)
    for (int v = 0; v < static_cast<int>(gs.size()); ++v)
      if (covers(fs[need[u]], gs[v], a, b)) adj[u].push_back(v);

  std::vector<int> match_right(gs.size(), -1);
  int matched = 0;
  for (size_t u = 0; u < need.size(); ++u) {
    std::vector<char> used(gs.size(), 0);
    if (kuhn_augment(static_cast<int>(u), adj, match_right, used)) ++matched;
  }
  if (matched != static_cast<int>(need.size())) return false;

  if (witness) {
    witness->alpha.clear();
    witness->beta.clear();
    for (int v = 0; v < static_cast<int>(gs.size()); ++v) {
      if (match_right[v] < 0) continue;
      const int i = need[match_right[v]];
      witness->alpha.push_back({i, v});
      witness->beta.push_back({v, i});
    }
  }
  return true;
}

bool factorization_feasible_bruteforce(const Barcode& f, const Barcode& g, double a,
                                       double b) {
  const std::vector<Bar> fs = expand_slots(f);
  const std::vector<Bar> gs = expand_slots(g);
  const double c = a + b;

  std::vector<std::pair<int, int>> alpha_vars;  // (i, j) with gen I_i -> T_a J_j
  for (int i = 0; i < static_cast<int>(fs.size()); ++i)
    for (int j = 0; j < static_cast<int>(gs.size()); ++j)
      if (cover_first_leg(fs[i], gs[j], a)) alpha_vars.emplace_back(i, j);

  std::vector<std::pair<int, int>> beta_vars;  // (j, i2) with gen T_a J_j -> T_c I_i2
  for (int j = 0; j < static_cast<int>(gs.size()); ++j)
    for (int i2 = 0; i2 < static_cast<int>(fs.size()); ++i2)
      if (cover_second_leg(gs[j], fs[i2], a, b)) beta_vars.emplace_back(j, i2);

  if (alpha_vars.size() > 20)
    throw std::invalid_argument("bruteforce factorization limited to 20 alpha entries");

  // Equations indexed by (i, i2) pairs that can carry a nonzero composite
  // or a nonzero tau component.
  std::vector<std::pair<int, int>> eqs;
  for (int i = 0; i < static_cast<int>(fs.size()); ++i)
    for (int i2 = 0; i2 < static_cast<int>(fs.size()); ++i2) {
      bool relevant = (i == i2) && needs_cover(fs[i], c);
      if (!relevant)
        for (int j = 0; j < static_cast<int>(gs.size()) && !relevant; ++j)
          relevant = composite_nonzero(fs[i], gs[j], fs[i2], a, b);
      if (relevant) eqs.emplace_back(i, i2);
    }

  const uint64_t alpha_count = uint64_t{1} << alpha_vars.size();
  for (uint64_t mask = 0; mask < alpha_count; ++mask) {
    Gf2Matrix system(static_cast<int>(eqs.size()), static_cast<int>(beta_vars.size()));
    std::vector<uint8_t> rhs(eqs.size(), 0);
    for (size_t e = 0; e < eqs.size(); ++e) {
      const auto [i, i2] = eqs[e];
      rhs[e] = (i == i2 && needs_cover(fs[i], c)) ? 1 : 0;
      for (size_t bv = 0; bv < beta_vars.size(); ++bv) {
        const auto [j, bi2] = beta_vars[bv];
        if (bi2 != i2) continue;
        if (!composite_nonzero(fs[i], gs[j], fs[i2], a, b)) continue;
        for (size_t av = 0; av < alpha_vars.size(); ++av) {
          const auto [ai, aj] = alpha_vars[av];
          if (ai == i && aj == j && ((mask >> av) & 1))
            system.flip(static_cast<int>(e), static_cast<int>(bv));
        }
      }
    }
    std::vector<uint8_t> x;
    if (system.solve(rhs, x)) return true;
  }
  return false;
}

}  // namespace detail

InterleavingCertificate is_interleaved(const Barcode& f, const Barcode& g, double a,
                                       double b) {
  if (a < 0 || b < 0) throw std::invalid_argument("is_interleaved requires a, b >= 0");
  InterleavingCertificate cert;
  cert.a = a;
  cert.b = b;
  FactorizationWitness w1, w2;
  const bool ok1 = detail::factorization_feasible(f, g, a, b, &w1);
  const bool ok2 = detail::factorization_feasible(g, f, b, a, &w2);
  cert.interleaved = ok1 && ok2;
  if (cert.interleaved) {
    cert.first = std::move(w1);
    cert.second = std::move(w2);
  } else {
    cert.failed_factorization = ok1 ? 2 : 1;
  }
  return cert;
}

namespace {

/// Multiplies one factorization witness out and compares against
/// tau_{a+b} on the source barcode.
bool verify_one(const std::vector<Bar>& fs, const std::vector<Bar>& gs,
                const FactorizationWitness& w, double a, double b) {
  const double c = a + b;
  for (const WitnessBlock& blk : w.alpha) {
    if (blk.from < 0 || blk.from >= static_cast<int>(fs.size())) return false;
    if (blk.to < 0 || blk.to >= static_cast<int>(gs.size())) return false;
    if (!cover_first_leg(fs[blk.from], gs[blk.to], a)) return false;
  }
  for (const WitnessBlock& blk : w.beta) {
    if (blk.from < 0 || blk.from >= static_cast<int>(gs.size())) return false;
    if (blk.to < 0 || blk.to >= static_cast<int>(fs.size())) return false;
    if (!cover_second_leg(gs[blk.from], fs[blk.to], a, b)) return false;
  }
  for (int i = 0; i < static_cast<int>(fs.size()); ++i)
    for (int i2 = 0; i2 < static_cast<int>(fs.size()); ++i2) {
      int parity = 0;
      for (const WitnessBlock& ab : w.alpha) {
        if (ab.from != i) continue;
        for (const WitnessBlock& bb : w.beta) {
          if (bb.from != ab.to || bb.to != i2) continue;
          if (composite_nonzero(fs[i], gs[ab.to], fs[i2], a, b)) parity ^= 1;
        }
      }
      const int target = (i == i2 && needs_cover(fs[i], c)) ? 1 : 0;
      if (parity != target) return false;
    }
  return true;
}

}  // namespace

bool InterleavingCertificate::verify(const Barcode& f, const Barcode& g) const {
  if (!interleaved || !first || !second) return false;
  const std::vector<Bar> fs = expand_slots(f);
  const std::vector<Bar> gs = expand_slots(g);
  return verify_one(fs, gs, *first, a, b) && verify_one(gs, fs, *second, b, a);
}

namespace {

bool pair_feasible(const Barcode& f, const Barcode& g, double a, double b) {
  return detail::factorization_feasible(f, g, a, b, nullptr) &&
         detail::factorization_feasible(g, f, b, a, nullptr);
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kEndpointTol) out.push_back(x);
  return out;
}

/// Split search: scans candidate a values (difference thresholds, their
/// complements, and midpoints) for one c = a + b.
bool split_feasible(const Barcode& f, const Barcode& g, double c,
                    const std::vector<double>& diffs) {
  std::vector<double> cand;
  cand.push_back(0.0);
  cand.push_back(c);
  for (double d : diffs) {
    if (d >= 0 && d <= c) {
      cand.push_back(d);
      cand.push_back(c - d);
    }
  }
  cand = sorted_unique(std::move(cand));
  std::vector<double> with_mid;
  for (size_t i = 0; i < cand.size(); ++i) {
    with_mid.push_back(cand[i]);
    if (i + 1 < cand.size()) with_mid.push_back(0.5 * (cand[i] + cand[i + 1]));
  }
  for (double a : with_mid)
    if (a >= 0 && c - a >= -kEndpointTol && pair_feasible(f, g, a, std::max(0.0, c - a)))
      return true;
  return false;
}

}  // namespace

double interleaving_distance(const Barcode& f, const Barcode& g) {
  std::vector<double> endpoints;
  for (const Barcode* bc : {&f, &g})
    for (const Bar& b : bc->bars()) {
      endpoints.push_back(b.birth);
      if (!b.is_ray()) endpoints.push_back(b.death);
    }

  std::vector<double> diffs{0.0};
  for (size_t i = 0; i < endpoints.size(); ++i)
    for (size_t j = 0; j < endpoints.size(); ++j) {
      const double d = endpoints[i] - endpoints[j];
      if (d >= 0) diffs.push_back(d);
    }
  diffs = sorted_unique(std::move(diffs));

  // The optimum a+b sits at a vertex of the axis-parallel/diagonal
  // constraint arrangement: a difference or a sum of two differences.
  std::vector<double> cand = diffs;
  for (size_t i = 0; i < diffs.size(); ++i)
    for (size_t j = i; j < diffs.size(); ++j) cand.push_back(diffs[i] + diffs[j]);
  cand = sorted_unique(std::move(cand));

  if (!split_feasible(f, g, cand.back(), diffs)) {
    // Feasibility is constant beyond the largest threshold; nothing
    // finite can work.
    return kInf;
  }

  // Feasibility in c is monotone (enlarging (a,b) preserves verdicts), so
  // binary search for the first feasible candidate.
  size_t lo = 0, hi = cand.size() - 1;
  if (split_feasible(f, g, cand.front(), diffs)) {
    hi = 0;
  } else {
    while (hi - lo > 1) {
      const size_t mid = lo + (hi - lo) / 2;
      if (split_feasible(f, g, cand[mid], diffs))
        hi = mid;
      else
        lo = mid;
    }
  }

  // The verdict is piecewise constant between adjacent candidates; if the
  // open interval below cand[hi] is already feasible the infimum is its
  // left endpoint (not attained).
  if (hi > 0) {
    const double mid = 0.5 * (cand[hi - 1] + cand[hi]);
    if (split_feasible(f, g, mid, diffs)) return cand[hi - 1];
  }
  return cand[hi];
}

double distance_to_zero(const Barcode& f) {
  if (f.has_ray()) return kInf;
  return f.max_length();
}

EpigraphSheaf EpigraphSheaf::sample_1d(const std::function<double(double)>& v, double lo,
                                       double hi, int count) {
  if (count < 2) throw std::invalid_argument("epigraph grid needs >= 2 nodes");
  EpigraphSheaf out;
  out.axes.resize(1);
  out.axes[0].resize(count);
  out.values.resize(count);
  for (int i = 0; i < count; ++i) {
    const double q = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    out.axes[0][i] = q;
    out.values[i] = v(q);
  }
  return out;
}

size_t EpigraphSheaf::node_count() const {
  size_t n = 1;
  for (const auto& ax : axes) n *= ax.size();
  return n;
}

void EpigraphSheaf::validate() const {
  if (axes.empty()) throw std::invalid_argument("epigraph sheaf needs >= 1 axis");
  for (const auto& ax : axes) {
    if (ax.size() < 2) throw std::invalid_argument("epigraph grid needs >= 2 nodes per axis");
    for (size_t i = 1; i < ax.size(); ++i)
      if (!(ax[i - 1] < ax[i]))
        throw std::invalid_argument("epigraph grid coordinates must be ascending");
  }
  if (values.size() != node_count())
    throw std::invalid_argument("epigraph value count does not match grid");
}

double epigraph_distance(const EpigraphSheaf& v, const EpigraphSheaf& w) {
  v.validate();
  w.validate();
  if (v.axes != w.axes) throw std::invalid_argument("epigraph sheaves on mismatched grids");
  double sup_wv = -kInf, sup_vw = -kInf;
  for (size_t i = 0; i < v.values.size(); ++i) {
    sup_wv = std::max(sup_wv, w.values[i] - v.values[i]);
    sup_vw = std::max(sup_vw, v.values[i] - w.values[i]);
  }
  return std::max(sup_wv, 0.0) + std::max(sup_vw, 0.0);
}

}  // namespace sheafenergy
