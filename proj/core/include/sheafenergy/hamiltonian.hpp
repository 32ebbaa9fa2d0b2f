#ifndef SHEAFENERGY_HAMILTONIAN_HPP
#define SHEAFENERGY_HAMILTONIAN_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sheafenergy/interleaving.hpp"

namespace sheafenergy {

/// Product of closed intervals in phase space (q_1..q_n, p_1..p_n).
struct PhaseBox {
  std::vector<std::pair<double, double>> intervals;
  bool contains(const std::vector<double>& x, double slack = 0.0) const;
};

/// Rectilinear sampling grid over phase space.
struct PhaseGrid {
  struct Axis {
    double lo = 0.0, hi = 0.0;
    int count = 2;
  };
  std::vector<Axis> axes;

  size_t node_count() const;
  /// Coordinate of node k on each axis, row-major with the last axis
  /// fastest.
  std::vector<double> node(size_t k) const;
  bool covers(const PhaseBox& box) const;
};

/// Time-dependent Hamiltonian on T*R^n with a declared compact support
/// box. evaluate(s, x) takes phase points x = (q, p).
struct HamiltonianSpec {
  int n = 1;
  std::function<double(double, const std::vector<double>&)> evaluate;
  PhaseBox support_box;
  bool time_dependent = false;
  std::string smoothness_note;
};

struct FlowResult {
  std::vector<std::vector<double>> endpoints;
  std::vector<std::vector<std::vector<double>>> trajectories;
  /// max |F(phi_s(x)) - F(x)| over recorded steps, for autonomous specs.
  double conserved_drift = 0.0;
};

/// Classical RK4 for Hamilton's equations dq/dt = dH/dp, dp/dt = -dH/dq,
/// with centered finite-difference gradients. Throws on non-finite
/// states.
FlowResult flow(const HamiltonianSpec& spec, const std::vector<double>& x0, double t1,
                int steps, bool record_trajectory = false);

/// Default-resolution flow, doubling the step count (from 1000 per unit
/// time) until the endpoint moves by less than endpoint_tol.
FlowResult flow_refined(const HamiltonianSpec& spec, const std::vector<double>& x0,
                        double t1, double endpoint_tol = 1e-8);

/// CSV dump of sampled trajectories: one row per (sample, step) with the
/// time and phase coordinates.
std::string trajectory_csv(const HamiltonianSpec& spec,
                           const std::vector<std::vector<double>>& samples, double t1,
                           int steps, int stride = 1);

struct HoferNorm {
  double value = 0.0;
  double convergence_delta = 0.0;
  int time_steps = 0;
};

/// Mean oscillation norm: trapezoid rule in time of the per-slice grid
/// oscillation max H_s - min H_s, with 0 entering the extrema whenever
/// the grid meets the support complement. Time steps double until the
/// relative change drops below 1e-3.
HoferNorm hofer_norm(const HamiltonianSpec& spec, const PhaseGrid& grid, int time_steps);

/// Region membership with clearance: clearance(x) < 0 inside, and gives
/// the distance to the region outside.
struct RegionTest {
  std::string name;
  std::function<double(const std::vector<double>&)> clearance;
};

RegionTest darboux_ball_region(double r);

struct DisplacementCertificate {
  bool verified = false;
  std::string reason;
  double hofer_value = 0.0;
  double hofer_delta = 0.0;
  double margin = 0.0;
  double min_clearance = 0.0;
  int rk4_steps = 0;
  int time_steps = 0;
  std::vector<int> grid_counts;
  std::map<std::string, double> family_params;

  std::string to_json() const;
};

/// Flows every sample to time 1 and certifies clearance >= margin from
/// the region. The certificate embeds the Hofer norm at the given
/// resolutions. Certification is on samples with a margin, never claimed
/// for the continuum.
DisplacementCertificate displaces(const HamiltonianSpec& spec,
                                  const std::vector<std::vector<double>>& a_samples,
                                  const RegionTest& b, double margin, int steps,
                                  const PhaseGrid& grid, int time_steps);

/// H = -kappa q_1 times a C^1 plateau bump in every phase coordinate;
/// the time-1 flow shifts p_1 by kappa across the plateau, displacing the
/// zero section from B(r) when kappa > r. Throws when the plateau fails
/// to cover B(r) or the p_1 drift.
HamiltonianSpec vertical_shift_spec(double r, double kappa, double plateau,
                                    double shoulder, int n = 1);

/// The frozen C^1 bump profile: 1 on [-plateau, plateau], cubic
/// smoothstep shoulders, 0 beyond.
double plateau_bump(double x, double plateau, double shoulder);

struct GenFunReport {
  double max_residual_p1 = 0.0;
  double max_residual_p2 = 0.0;
  int samples = 0;
};

/// Flows F = q^2 + p^2 for random times s and initial data and checks the
/// generating-function relations p1 = -dS/dq1, p2 = +dS/dq2 at the time-s
/// image. This experiment fixes the sign conventions everything else
/// trusts.
GenFunReport verify_generating_function(int samples, double tolerance, int steps = 2000,
                                        uint64_t seed = 2026);

struct CapacitySearch {
  double r = 1.0;
  double plateau = 1.2;
  double shoulder = 1.0;
  double margin = 0.05;
  int rk4_steps = 1000;
  int time_steps = 16;
  int n = 1;
  std::vector<double> kappa_grid;
  double sample_halfwidth = 1.5;
  int sample_count = 61;
};

struct FamilySearchResult {
  double best = kInf;
  bool found = false;
  DisplacementCertificate best_certificate;
  std::vector<DisplacementCertificate> certificates;
  int evaluations = 0;
};

/// Upper bound for the displacement energy over the vertical-shift
/// family: scans the kappa grid, then refines toward smaller verified
/// kappa by bisection within the evaluation budget. +inf when nothing
/// verifies.
FamilySearchResult displacement_energy_upper(const CapacitySearch& search, int budget);

struct StabilityReport {
  double distance = 0.0;
  double hofer = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool bound_holds = false;

  std::string to_json() const;
};

/// Desk-scale instance of the stability bound: the epigraph distance
/// d(0, V) against the Hofer norm of H = V(q) x bump. The plateau must
/// cover the sampled grid.
StabilityReport stability_experiment(const std::function<double(double)>& v, double lo,
                                     double hi, int count, double plateau_lo,
                                     double plateau_hi, double shoulder, double p_extent,
                                     double tolerance = 1e-9);

}  // namespace sheafenergy

#endif
