#ifndef SHEAFENERGY_CELLULAR_INTERNAL_HPP
#define SHEAFENERGY_CELLULAR_INTERNAL_HPP

// Shared internals of the cellular oracle: 1-D fiber complexes of the sum
// map, used by oracle_tau and as a stalk cross-check inside the 2-D
// convolution engine. Not installed.

#include <map>
#include <vector>

#include "sheafenergy/cellular.hpp"
#include "sheafenergy/gf2.hpp"

namespace sheafenergy::internal {

bool approx_eq(double x, double y);
std::vector<double> sorted_unique_tol(std::vector<double> v);
int find_breakpoint(const std::vector<double>& bps, double x);
int cell_of(const std::vector<double>& bps, double x, bool at_point);
bool in_halfopen(double x, double lo, double hi);
Gf2Matrix gf2_identity(int n);

/// H_c two-term complex of the fiber over z of layer (x) k_{[jb, jd)}.
struct FiberComplex {
  std::vector<double> w_bps;
  std::vector<int> point_dims;
  std::vector<int> open_dims;
  std::vector<int> point_off, open_off;
  Gf2Matrix delta;

  int h0() const { return delta.cols() - delta.rank(); }
  int h1() const { return delta.rows() - delta.rank(); }
};

/// j_point selects the skyscraper k_{{jb}} instead of k_{[jb, jd)}.
FiberComplex build_fiber(const CellComplexSheaf& f, const ZigzagLayer& layer, double z,
                         double jb, double jd, bool j_point,
                         const std::vector<double>& extra);

/// Stalk dimensions per output degree of (layer (x) k_J) pushed along the
/// sum map, over the point z.
std::map<int, int> pushforward_stalk_dims(const CellComplexSheaf& f,
                                          const ZigzagLayer& layer, int layer_degree,
                                          double z, double jb, double jd, bool j_point);

}  // namespace sheafenergy::internal

#endif
