#include "sheafenergy/energy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sheafenergy/interleaving.hpp"

namespace sheafenergy {

std::string EnergyReport::to_json() const {
  nlohmann::json j;
  j["r"] = r;
  j["n"] = n;
  j["origin_value"] = origin_value;
  j["grid_sup"] = grid_sup;
  j["argmax"] = {argmax_i, argmax_j};
  j["tolerance"] = tolerance;
  return j.dump();
}

Barcode e_sigma_fiber(double q1, double q2, double r, int n) {
  // The fiber is the sign-flipped sigma fiber shifted into degree -(n+1).
  const SigmaBounds bounds = sigma_bounds(q1, q2, r);
  if (!bounds.times.exists) return Barcode{};
  if (!(bounds.f2 < bounds.f1 - 1e-15)) return Barcode{};
  return Barcode::single(-bounds.f1, -bounds.f2, -(n + 1));
}

EnergyReport energy_lower_bound(double r, int n, int nodes, double tolerance) {
  const SigmaField field = sigma_field(r, n, nodes);
  EnergyReport report;
  report.r = r;
  report.n = n;
  report.tolerance = tolerance;

  const int mid = (nodes - 1) / 2;
  const Barcode origin_fiber = [&] {
    const Barcode sigma = fiber_restrict(field, mid, mid);
    std::vector<Bar> flipped;
    for (const Bar& b : sigma.bars())
      flipped.push_back(Bar(-b.death, -b.birth, -(n + 1), b.multiplicity));
    return Barcode(flipped);
  }();
  report.origin_value = distance_to_zero(origin_fiber);

  double sup = 0.0;
  int bi = mid, bj = mid;
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) {
      const int at = field.index(i, j);
      if (!field.exists[at]) continue;
      const double len = field.f1[at] - field.f2[at];
      if (len > sup) {
        sup = len;
        bi = i;
        bj = j;
      }
    }
  report.grid_sup = sup;
  report.argmax_i = bi;
  report.argmax_j = bj;
  return report;
}

HoferCheckResult categorical_hofer_check(const EnergyReport& report,
                                         const DisplacementCertificate& certificate,
                                         double tolerance) {
  if (!certificate.verified)
    throw std::invalid_argument(
        "categorical_hofer_check requires a verified displacement certificate");
  HoferCheckResult out;
  out.energy = report.origin_value;
  out.hofer_value = certificate.hofer_value;
  out.tolerance = tolerance;
  out.pass = report.origin_value <= certificate.hofer_value + tolerance;
  if (out.pass) {
    out.detail = "categorical energy bounded by the Hofer norm";
  } else {
    std::ostringstream msg;
    msg.precision(17);
    msg << "falsification event: energy " << report.origin_value << " exceeds Hofer norm "
        << certificate.hofer_value << " (tolerance " << tolerance << ", r=" << report.r
        << ", n=" << report.n << ", margin=" << certificate.margin << ")";
    out.detail = msg.str();
  }
  return out;
}

}  // namespace sheafenergy
