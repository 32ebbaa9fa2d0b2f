#ifndef SHEAFENERGY_ENERGY_HPP
#define SHEAFENERGY_ENERGY_HPP

#include <string>

#include "sheafenergy/ball.hpp"
#include "sheafenergy/barcode.hpp"
#include "sheafenergy/hamiltonian.hpp"

namespace sheafenergy {

/// Fiberwise lower-bound data for the categorical energy of the
/// zero-section sheaf relative to the Darboux ball B(r). The toolkit
/// reports the origin fiber and the grid supremum; it never claims the
/// full global distance.
struct EnergyReport {
  double r = 1.0;
  int n = 1;
  double origin_value = 0.0;
  double grid_sup = 0.0;
  int argmax_i = 0;
  int argmax_j = 0;
  double tolerance = 1e-9;

  std::string to_json() const;
};

/// Fiber of the projected zero-section sheaf at a point of N: the bar
/// [-f1, -f2) in stored degree -(n+1). Throws outside N.
Barcode e_sigma_fiber(double q1, double q2, double r, int n);

/// Origin fiber persistence and the grid supremum of the fiber bar
/// lengths over N.
EnergyReport energy_lower_bound(double r, int n, int nodes, double tolerance = 1e-9);

struct HoferCheckResult {
  bool pass = false;
  double energy = 0.0;
  double hofer_value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Instance check of the inequality energy <= Hofer norm for a certified
/// displacing Hamiltonian. Throws when the certificate is not verified;
/// a violation is reported as a falsification event with full inputs.
HoferCheckResult categorical_hofer_check(const EnergyReport& report,
                                         const DisplacementCertificate& certificate,
                                         double tolerance = 1e-9);

}  // namespace sheafenergy

#endif
