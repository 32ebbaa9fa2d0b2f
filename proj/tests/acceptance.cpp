// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here in code.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sheafenergy/ball.hpp"
#include "sheafenergy/cellular.hpp"
#include "sheafenergy/energy.hpp"
#include "sheafenergy/hamiltonian.hpp"
#include "sheafenergy/interleaving.hpp"
#include "sheafenergy/rng.hpp"

using namespace sheafenergy;
namespace fs = std::filesystem;

namespace {

const double pi = std::acos(-1.0);
int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "criterion " << number << " [" << name << "]: " << (pass ? "PASS" : "FAIL")
            << " - " << detail << "\n";
  if (!pass) ++failures;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(SHEAFENERGY_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

// 1. Origin fiber of Sigma: [-(pi/2) r^2, 0) to 1e-9 for r in {0.5, 1, 2}.
void criterion_1() {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    const SigmaField field = sigma_field(r, 1, 101);
    const Barcode fiber = fiber_restrict(field, 50, 50);
    if (fiber.bars().size() != 1) {
      report(1, "sigma origin fiber", false, "origin fiber is not a single bar");
      return;
    }
    worst = std::max(worst, std::abs(fiber.bars()[0].birth + pi / 2 * r * r));
    worst = std::max(worst, std::abs(fiber.bars()[0].death));
    if (fiber.bars()[0].degree != 0) {
      report(1, "sigma origin fiber", false, "origin fiber in the wrong degree");
      return;
    }
  }
  std::ostringstream d;
  d << "max endpoint error " << worst << " (tol 1e-9)";
  report(1, "sigma origin fiber", worst <= 1e-9, d.str());
}

// 2. Categorical energy origin value (pi/2) r^2 to 1e-9, with r^2 scaling.
void criterion_2() {
  double worst = 0.0, worst_scale = 0.0;
  const double base = energy_lower_bound(1.0, 1, 101).origin_value;
  for (double r : {0.5, 1.0, 2.0}) {
    const EnergyReport rep = energy_lower_bound(r, 1, 101);
    worst = std::max(worst, std::abs(rep.origin_value - 0.5 * pi * r * r));
  }
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const EnergyReport rep = energy_lower_bound(r, 1, 101);
    worst_scale = std::max(worst_scale,
                           std::abs(rep.origin_value / base - r * r) / (r * r));
  }
  std::ostringstream d;
  d << "max deviation " << worst << " (tol 1e-9), scaling relative error " << worst_scale;
  report(2, "categorical energy", worst <= 1e-9 && worst_scale <= 1e-9, d.str());
}

// 3. Critical times vs dense scan at 100 seeded nodes; discriminant
// identity at 1e4 nodes.
void criterion_3() {
  CounterRng rng(301);
  double worst_scan = 0.0;
  int checked = 0;
  const double r = 1.0;
  while (checked < 100) {
    const double q1 = rng.uniform(-0.95, 0.95);
    const double q2 = rng.uniform(-0.95, 0.95);
    const CriticalTimes ct = critical_times(q1, q2, r);
    if (!ct.exists || ct.degenerate != CriticalTimes::Degenerate::none) continue;
    ++checked;
    // dense scan of stationary points, step 1e-5, with the sign-change
    // cell refined by linear interpolation of the scanned derivative
    std::vector<double> found;
    const double step = 1e-5;
    auto deriv = [&](double s) {
      return (f_value(s + step, q1, q2, r) - f_value(s - step, q1, q2, r)) / (2 * step);
    };
    double prev = deriv(2 * step);
    for (double s = 3 * step; s < pi / 2 - 2 * step; s += step) {
      const double d = deriv(s);
      if ((prev <= 0 && d > 0) || (prev >= 0 && d < 0))
        found.push_back(s - step + step * prev / (prev - d));
      prev = d;
    }
    if (found.size() != 2) {
      report(3, "critical-time oracle", false, "dense scan did not find two stationary points");
      return;
    }
    worst_scan = std::max(worst_scan, std::abs(found[0] - ct.s1));
    worst_scan = std::max(worst_scan, std::abs(found[1] - ct.s2));
  }
  double worst_disc = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double rr = (i % 3 == 0) ? 0.5 : (i % 3 == 1 ? 1.0 : 2.0);
    const double q1 = rng.uniform(-rr, rr), q2 = rng.uniform(-rr, rr);
    const double lhs = q1 * q1 * q2 * q2 - rr * rr * (q1 * q1 + q2 * q2 - rr * rr);
    const double rhs = (rr * rr - q1 * q1) * (rr * rr - q2 * q2);
    worst_disc = std::max(worst_disc, std::abs(lhs - rhs) / (rr * rr * rr * rr));
  }
  std::ostringstream d;
  d << "scan deviation " << worst_scan << " (tol 1e-6), discriminant residual "
    << worst_disc << " (tol 1e-12)";
  report(3, "critical-time oracle", worst_scan <= 1e-6 && worst_disc <= 1e-12, d.str());
}

// 4. Generating-function residuals over 1000 seeded samples, RK4 at 2000
// steps.
void criterion_4() {
  const GenFunReport rep = verify_generating_function(1000, 1e-6, 2000, 2026);
  std::ostringstream d;
  d << "max residuals " << rep.max_residual_p1 << ", " << rep.max_residual_p2
    << " (tol 1e-6)";
  report(4, "generating function", rep.max_residual_p1 <= 1e-6 && rep.max_residual_p2 <= 1e-6,
         d.str());
}

FamilySearchResult capacity_result() {
  CapacitySearch search;
  search.r = 1.0;
  search.plateau = 1.2;
  search.shoulder = 1.0;
  search.margin = 0.05;
  search.kappa_grid = {1.1, 1.3, 1.6, 2.0};
  return displacement_energy_upper(search, 8);
}

// 5. Energy-capacity instance: every verified certificate respects the
// (pi/2) r^2 bound; the canonical kappa = 1.1 certificate matches its
// golden value to 1e-6.
void criterion_5(const FamilySearchResult& result) {
  bool pass = true;
  std::ostringstream d;
  if (!result.found) {
    report(5, "energy-capacity", false, "no certificate verified");
    return;
  }
  double min_hofer = kInf;
  for (const auto& cert : result.certificates)
    if (cert.verified) min_hofer = std::min(min_hofer, cert.hofer_value);
  if (min_hofer < pi / 2 - 1e-3) {
    pass = false;
    d << "certified displacer below the bound: " << min_hofer << "; ";
  }
  const DisplacementCertificate* canonical = nullptr;
  for (const auto& cert : result.certificates)
    if (cert.verified && std::abs(cert.family_params.at("kappa") - 1.1) < 1e-12)
      canonical = &cert;
  if (!canonical) {
    report(5, "energy-capacity", false, "canonical kappa=1.1 certificate missing");
    return;
  }
  const fs::path golden = fs::path(SHEAFENERGY_GOLDEN_DIR) / "hofer_vertical_shift.json";
  std::ifstream in(golden);
  if (!in) {
    report(5, "energy-capacity", false, "golden file missing: " + golden.string());
    return;
  }
  nlohmann::json j;
  in >> j;
  const double frozen = j.at("certificate").at("hofer_value").get<double>();
  const double diff = std::abs(frozen - canonical->hofer_value);
  if (diff > 1e-6) pass = false;
  d << "min verified hofer " << min_hofer << " >= " << (pi / 2 - 1e-3)
    << ", golden deviation " << diff << " (tol 1e-6)";
  report(5, "energy-capacity", pass, d.str());
}

// 6. Categorical-Hofer consistency for every certificate from (5), and
// the injected-violation negative path exits 1.
void criterion_6(const FamilySearchResult& result) {
  const EnergyReport rep = energy_lower_bound(1.0, 1, 101);
  bool pass = true;
  int checked = 0;
  for (const auto& cert : result.certificates) {
    if (!cert.verified) continue;
    ++checked;
    if (!categorical_hofer_check(rep, cert, 1e-9).pass) pass = false;
  }
  const int injected = run_tool("capacity --r 1 --grid 41 --kappa 1.1 --budget 1 "
                                "--inject-violation --out " +
                                (fs::temp_directory_path() / "sheafenergy_acc6").string());
  if (injected != 1) pass = false;
  std::ostringstream d;
  d << checked << " certificates checked against origin value " << rep.origin_value
    << ", injected-violation exit " << injected;
  report(6, "categorical-Hofer", pass && checked > 0, d.str());
}

// 7. Oracle equivalence: closed-form hom and tau rules against the
// cellular oracle on >= 100 seeded pairs; unit law; golden files verify.
void criterion_7() {
  CounterRng rng(701);
  auto random_bar = [&](bool allow_ray) {
    const int b = static_cast<int>(rng.next_below(16));
    const int len = 1 + static_cast<int>(rng.next_below(12));
    Bar bar(b / 4.0, (b + len) / 4.0);
    bar.degree = static_cast<int>(rng.next_below(3)) - 1;
    if (allow_ray && rng.next_below(6) == 0) bar.death = kInf;
    return bar;
  };
  int hom_checked = 0;
  for (int i = 0; i < 140 || hom_checked < 100; ++i) {
    const Bar a = random_bar(false);
    const Bar b = random_bar(false);
    const HomDims closed = hom_dims(a, b);
    const HomDims oracle = oracle_hom(build_cellular(Barcode({a}), -1, 64),
                                      build_cellular(Barcode({b}), -1, 64));
    ++hom_checked;
    if (closed != oracle) {
      report(7, "oracle equivalence", false, "hom rule disagrees with the oracle");
      return;
    }
    if (i > 400) break;
  }
  int tau_checked = 0;
  for (int i = 0; i < 100; ++i) {
    Bar bar = random_bar(true);
    bar.degree = 0;
    const Barcode f({bar});
    const double c = static_cast<double>(rng.next_below(20)) / 4.0;
    const bool closed_zero = tau_is_zero(f, c);
    const int rank = oracle_tau(build_cellular(f, -1, 64), c);
    ++tau_checked;
    if (closed_zero != (rank == 0)) {
      report(7, "oracle equivalence", false, "tau rule disagrees with the oracle");
      return;
    }
  }
  // unit law on seeded inputs
  const CellComplexSheaf unit = make_cellular_point(0.0, -1, 64);
  for (int i = 0; i < 12; ++i) {
    std::vector<Bar> bars;
    const int nb = 1 + static_cast<int>(rng.next_below(3));
    for (int k = 0; k < nb; ++k) bars.push_back(random_bar(false));
    const Barcode f(bars);
    if (!oracle_convolve(build_cellular(f, -1, 64), unit).approx_equal(f, 1e-9)) {
      report(7, "oracle equivalence", false, "unit law failed");
      return;
    }
  }
  const int golden = run_tool("oracle --mode verify --golden " +
                              std::string(SHEAFENERGY_GOLDEN_DIR));
  std::ostringstream d;
  d << hom_checked << " hom pairs, " << tau_checked
    << " tau inputs, unit law on 12 barcodes, golden verify exit " << golden;
  report(7, "oracle equivalence", golden == 0, d.str());
}

// 8. Interleaving distance properties: d(F,F) = 0, triangle inequality on
// 200 seeded triples, distance_to_zero agreement, monotonicity.
void criterion_8() {
  CounterRng rng(801);
  auto random_barcode = [&] {
    const int n = 1 + static_cast<int>(rng.next_below(3));
    std::vector<Bar> bars;
    for (int i = 0; i < n; ++i) {
      const double birth = static_cast<double>(static_cast<int>(rng.next_below(32))) / 8.0;
      const double len = static_cast<double>(1 + static_cast<int>(rng.next_below(24))) / 8.0;
      Bar b(birth, birth + len);
      b.degree = static_cast<int>(rng.next_below(3)) - 1;
      bars.push_back(b);
    }
    return Barcode(bars);
  };
  int triangles = 0;
  for (int i = 0; i < 200; ++i) {
    const Barcode f = random_barcode();
    const Barcode g = random_barcode();
    const Barcode h = random_barcode();
    if (interleaving_distance(f, f) != 0.0) {
      report(8, "interleaving distance", false, "d(F, F) != 0");
      return;
    }
    const double dfg = interleaving_distance(f, g);
    const double dgh = interleaving_distance(g, h);
    const double dfh = interleaving_distance(f, h);
    ++triangles;
    if (dfh > dfg + dgh + 1e-9) {
      report(8, "interleaving distance", false, "triangle inequality violated");
      return;
    }
    if (std::abs(distance_to_zero(f) - interleaving_distance(Barcode{}, f)) > 1e-9) {
      report(8, "interleaving distance", false, "distance_to_zero mismatch");
      return;
    }
    const double a = rng.uniform(0, 2), b = rng.uniform(0, 2);
    if (is_interleaved(f, g, a, b).interleaved &&
        !is_interleaved(f, g, a + 0.5, b + 0.25).interleaved) {
      report(8, "interleaving distance", false, "monotonicity violated");
      return;
    }
  }
  std::ostringstream d;
  d << triangles << " seeded triples, zero failures";
  report(8, "interleaving distance", true, d.str());
}

// 9. Stability tightness for V = sin on [-pi, pi] with a tight plateau.
void criterion_9() {
  const StabilityReport rep = stability_experiment(
      [](double q) { return std::sin(q); }, -pi, pi, 2001, -pi, pi, 0.5, 0.5);
  const bool pass = rep.distance == 2.0 && rep.hofer >= 2.0 && rep.hofer <= 2.1;
  std::ostringstream d;
  d << "distance " << rep.distance << " (exact 2), hofer " << rep.hofer << " in [2, 2.1]";
  report(9, "stability tightness", pass, d.str());
}

// 10. Dynamics sanity: autonomous drift and the unit Jacobian determinant.
void criterion_10() {
  HamiltonianSpec osc;
  osc.n = 1;
  osc.time_dependent = false;
  osc.support_box.intervals = {{-1e9, 1e9}, {-1e9, 1e9}};
  osc.evaluate = [](double, const std::vector<double>& x) {
    return x[0] * x[0] + x[1] * x[1];
  };
  const FlowResult fr = flow(osc, {0.7, -0.4}, pi, 2000);
  const double drift = fr.conserved_drift;

  const HamiltonianSpec shift = vertical_shift_spec(1.0, 1.1, 1.2, 1.0);
  CounterRng rng(1001);
  double worst_det = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double eps = 3e-4;
    double jac[2][2];
    for (int c = 0; c < 2; ++c) {
      std::vector<double> xp = x, xm = x;
      xp[c] += eps;
      xm[c] -= eps;
      const auto fp = flow_refined(shift, xp, 1.0).endpoints[0];
      const auto fm = flow_refined(shift, xm, 1.0).endpoints[0];
      for (int r = 0; r < 2; ++r) jac[r][c] = (fp[r] - fm[r]) / (2 * eps);
    }
    worst_det = std::max(worst_det,
                         std::abs(jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0] - 1.0));
  }
  std::ostringstream d;
  d << "energy drift " << drift << " (tol 1e-6), max |det - 1| " << worst_det
    << " (tol 1e-4) at 100 points";
  report(10, "dynamics sanity", drift <= 1e-6 && worst_det <= 1e-4, d.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  const FamilySearchResult capacity = capacity_result();
  criterion_5(capacity);
  criterion_6(capacity);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: FAILURES present")
            << "\n";
  return failures == 0 ? 0 : 1;
}
