#ifndef SHEAFENERGY_CELLULAR_HPP
#define SHEAFENERGY_CELLULAR_HPP

#include <map>
#include <vector>

#include "sheafenergy/barcode.hpp"
#include "sheafenergy/gf2.hpp"
#include "sheafenergy/interleaving.hpp"

namespace sheafenergy {

/// One graded layer of a constructible sheaf on the stratified line.
///
/// K breakpoints x_0 < ... < x_{K-1} cut the line into 2K+1 cells,
/// indexed left to right: even indices are open intervals (index 0 is
/// (-inf, x_0), index 2K is (x_{K-1}, +inf)), odd index 2k+1 is the point
/// {x_k}. The layer stores a stalk dimension per cell and the two
/// generization matrices out of every point cell.
struct ZigzagLayer {
  std::vector<int> dims;
  std::vector<Gf2Matrix> gen_left;   // {x_k} -> cell 2k, one per breakpoint
  std::vector<Gf2Matrix> gen_right;  // {x_k} -> cell 2k+2
};

/// Finite cellular model of a complex of sheaves on a bounded window of
/// the line: one zigzag layer per cohomological degree. This is the
/// brute-force side of every oracle computation; it never consults the
/// closed-form barcode rules.
struct CellComplexSheaf {
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool clipped = false;  // rays were cut at the window edge
  std::vector<double> breakpoints;
  std::map<int, ZigzagLayer> layers;  // degree -> layer

  int cell_count() const { return 2 * static_cast<int>(breakpoints.size()) + 1; }
  /// Checks monotone breakpoints, matrix shapes, and bounded support.
  void validate() const;
  /// Stalk dimension of one layer at a position; `at_point` selects the
  /// point cell when the position sits on a breakpoint.
  int stalk_dim(int degree, double position, bool at_point) const;
};

/// Cellular model of a barcode on the closed window [lo, hi]. Finite
/// endpoints must lie inside the window; rays are clipped at the right
/// edge and flag the model. Cell-wise sections reproduce the barcode's
/// constant pieces.
CellComplexSheaf build_cellular(const Barcode& f, double window_lo, double window_hi);

/// Skyscraper sheaf at one point, the convolution unit when x = 0.
CellComplexSheaf make_cellular_point(double x, double window_lo, double window_hi,
                                     int degree = 0, int mult = 1);

/// Graded dimensions of the derived hom, computed from the two-term hom
/// complex of the zigzag representations. Both models must share a
/// window.
HomDims oracle_hom(const CellComplexSheaf& f, const CellComplexSheaf& g);

/// Rank of the canonical morphism F -> T_c F in output degree 0,
/// maximized over the stalks of the model. Computed by convolving with
/// the morphism of clipped rays k_{>=0} -> k_{>=c} fiber by fiber; the
/// window must leave room for the translate.
int oracle_tau(const CellComplexSheaf& f, double c);

/// Barcode of the convolution F * G: derived pushforward of the external
/// product along addition, computed exactly on the product cell structure
/// refined by the fibers of the sum map. Inputs must have bounded
/// support (rays only in clipped form).
Barcode oracle_convolve(const CellComplexSheaf& f, const CellComplexSheaf& g);

/// Contiguous run of cells [first_cell, last_cell] carried with a
/// multiplicity; the output of the interval decomposition below.
struct IntervalPiece {
  int first_cell = 0;
  int last_cell = 0;
  int multiplicity = 0;
};

/// Exact interval decomposition of one zigzag layer via window
/// generalized ranks (rank of the canonical map lim -> colim over every
/// cell window, then inclusion-exclusion).
std::vector<IntervalPiece> decompose_layer(const ZigzagLayer& layer);

}  // namespace sheafenergy

#endif
