#ifndef SHEAFENERGY_INTERLEAVING_HPP
#define SHEAFENERGY_INTERLEAVING_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "sheafenergy/barcode.hpp"

namespace sheafenergy {

/// degree -> dimension, zero dimensions omitted.
using HomDims = std::map<int, int>;

/// Shifts every bar by c. Degrees and multiplicities are untouched.
Barcode translate(const Barcode& f, double c);

/// True iff the canonical morphism tau_c(F): F -> T_c F vanishes, i.e.
/// every bar has death - birth <= c. Rays never vanish. The rule is
/// validated against cellular_oracle ranks in the test suite.
bool tau_is_zero(const Barcode& f, double c);

/// Graded dimensions of Hom(k_I, k_J[.]) between single bars, in the
/// convention fixed by the cellular oracle (see docs/hom_conventions.md):
///   degree dJ-dI:     1 iff  a <= c < b <= d   for I=[a,b), J=[c,d)
///   degree dJ-dI+1:   1 iff  c < a <= d < b
/// scaled by the two multiplicities.
HomDims hom_dims(const Bar& i, const Bar& j);

/// One block of an interleaving witness: the canonical generator from
/// bar slot `from` of the source barcode to bar slot `to` of the target
/// (slots enumerate bars in canonical order, expanded by multiplicity).
struct WitnessBlock {
  int from = 0;
  int to = 0;
};

/// Morphism pair (alpha, beta) realizing one factorization
/// [F -> T_a G -> T_{a+b} F] = tau_{a+b}(F).
struct FactorizationWitness {
  std::vector<WitnessBlock> alpha;
  std::vector<WitnessBlock> beta;
};

struct InterleavingCertificate {
  double a = 0.0;
  double b = 0.0;
  bool interleaved = false;
  /// Present on "yes": witnesses for the two factorization equations.
  std::optional<FactorizationWitness> first;
  std::optional<FactorizationWitness> second;
  /// On "no": 1 or 2, naming the factorization that has no solution.
  int failed_factorization = 0;

  /// Multiplies the witness blocks out over the coefficient field and
  /// checks both composition equations against tau_{a+b}.
  bool verify(const Barcode& f, const Barcode& g) const;
};

/// Decides whether (F, G) is (a,b)-interleaved: both factorizations must
/// exist, as independent feasibility problems. Exact decision over the
/// field with two elements.
InterleavingCertificate is_interleaved(const Barcode& f, const Barcode& g, double a,
                                       double b);

/// inf{a+b : (F,G) is (a,b)-interleaved}, +inf when no finite pair works.
/// Candidates are enumerated from pairwise endpoint differences and their
/// pairwise sums, refined by midpoints; a bounded bisection backs up the
/// enumeration.
double interleaving_distance(const Barcode& f, const Barcode& g);

/// d(0, F): max bar length, +inf when F has a ray, 0 when F is empty.
/// Equals interleaving_distance(Barcode{}, F) on every tested input.
double distance_to_zero(const Barcode& f);

/// Sampled potential V(q) on a rectilinear grid, standing for the sheaf
/// supported on the epigraph {z >= V(q)}.
struct EpigraphSheaf {
  std::vector<std::vector<double>> axes;  // ascending node coordinates, >= 2 per axis
  std::vector<double> values;             // row-major, size = product of axis sizes

  static EpigraphSheaf sample_1d(const std::function<double(double)>& v, double lo,
                                 double hi, int count);
  size_t node_count() const;
  void validate() const;
};

/// max(sup(W-V), 0) + max(sup(V-W), 0) over shared grid nodes. Throws on
/// mismatched grids. The closed form is validated against the
/// is_interleaved decision procedure on fiberwise models in the tests.
double epigraph_distance(const EpigraphSheaf& v, const EpigraphSheaf& w);

namespace detail {
/// Feasibility of [F -> T_a G -> T_{a+b} F] = tau_{a+b}(F) alone, by
/// injective matching over bar slots; optionally emits a witness.
bool factorization_feasible(const Barcode& f, const Barcode& g, double a, double b,
                            FactorizationWitness* witness);
/// Test-grade exhaustive decision of the same factorization by
/// enumerating alpha and solving the linear system in beta. Exponential;
/// callers must keep instances tiny.
bool factorization_feasible_bruteforce(const Barcode& f, const Barcode& g, double a,
                                       double b);
}  // namespace detail

}  // namespace sheafenergy

#endif
