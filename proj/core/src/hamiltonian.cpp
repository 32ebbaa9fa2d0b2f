#include "sheafenergy/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "sheafenergy/rng.hpp"

namespace sheafenergy {

namespace {

const double kPi = std::acos(-1.0);

/// Deterministic sum independent of accumulation order effects.
double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  while (v.size() > 1) {
    std::vector<double> next;
    next.reserve((v.size() + 1) / 2);
    for (size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
    if (v.size() % 2) next.push_back(v.back());
    v = std::move(next);
  }
  return v[0];
}

constexpr double kGradStep = 1e-6;

}  // namespace

bool PhaseBox::contains(const std::vector<double>& x, double slack) const {
  if (x.size() != intervals.size()) return false;
  for (size_t i = 0; i < intervals.size(); ++i)
    if (x[i] < intervals[i].first - slack || x[i] > intervals[i].second + slack)
      return false;
  return true;
}

size_t PhaseGrid::node_count() const {
  size_t n = 1;
  for (const Axis& a : axes) n *= static_cast<size_t>(a.count);
  return n;
}

std::vector<double> PhaseGrid::node(size_t k) const {
  std::vector<double> x(axes.size());
  for (size_t i = axes.size(); i-- > 0;) {
    const Axis& a = axes[i];
    const size_t idx = k % static_cast<size_t>(a.count);
    k /= static_cast<size_t>(a.count);
    x[i] = (a.count == 1) ? a.lo
                          : a.lo + (a.hi - a.lo) * static_cast<double>(idx) / (a.count - 1);
  }
  return x;
}

bool PhaseGrid::covers(const PhaseBox& box) const {
  if (axes.size() != box.intervals.size()) return false;
  for (size_t i = 0; i < axes.size(); ++i)
    if (axes[i].lo > box.intervals[i].first + 1e-12 ||
        axes[i].hi < box.intervals[i].second - 1e-12)
      return false;
  return true;
}

namespace {

std::vector<double> hamiltonian_field(const HamiltonianSpec& spec, double s,
                                      const std::vector<double>& x) {
  const int n = spec.n;
  std::vector<double> v(2 * n), probe = x;
  for (int i = 0; i < 2 * n; ++i) {
    probe[i] = x[i] + kGradStep;
    const double hp = spec.evaluate(s, probe);
    probe[i] = x[i] - kGradStep;
    const double hm = spec.evaluate(s, probe);
    probe[i] = x[i];
    const double grad = (hp - hm) / (2.0 * kGradStep);
    if (i < n)
      v[i + n] = -grad;  // dp/dt = -dH/dq
    else
      v[i - n] = grad;  // dq/dt = dH/dp
  }
  return v;
}

void check_finite(const std::vector<double>& x) {
  for (double c : x)
    if (!std::isfinite(c)) throw std::runtime_error("flow reached a non-finite state");
}

}  // namespace

FlowResult flow(const HamiltonianSpec& spec, const std::vector<double>& x0, double t1,
                int steps, bool record_trajectory) {
  if (steps < 1) throw std::invalid_argument("flow requires steps >= 1");
  if (static_cast<int>(x0.size()) != 2 * spec.n)
    throw std::invalid_argument("flow state has the wrong dimension");
  check_finite(x0);

  FlowResult out;
  std::vector<double> x = x0;
  std::vector<std::vector<double>> traj;
  if (record_trajectory) traj.push_back(x);
  const double h = t1 / steps;
  const double e0 = spec.time_dependent ? 0.0 : spec.evaluate(0.0, x0);

  std::vector<double> k1, k2, k3, k4, tmp(x.size());
  for (int step = 0; step < steps; ++step) {
    const double s = h * step;
    k1 = hamiltonian_field(spec, s, x);
    for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    k2 = hamiltonian_field(spec, s + 0.5 * h, tmp);
    for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    k3 = hamiltonian_field(spec, s + 0.5 * h, tmp);
    for (size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + h * k3[i];
    k4 = hamiltonian_field(spec, s + h, tmp);
    for (size_t i = 0; i < x.size(); ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    check_finite(x);
    if (record_trajectory) traj.push_back(x);
    if (!spec.time_dependent)
      out.conserved_drift = std::max(out.conserved_drift, std::abs(spec.evaluate(0.0, x) - e0));
  }
  out.endpoints.push_back(std::move(x));
  if (record_trajectory) out.trajectories.push_back(std::move(traj));
  return out;
}

FlowResult flow_refined(const HamiltonianSpec& spec, const std::vector<double>& x0,
                        double t1, double endpoint_tol) {
  int steps = std::max(1, static_cast<int>(1000 * std::max(std::abs(t1), 1.0)));
  FlowResult prev = flow(spec, x0, t1, steps);
  for (int round = 0; round < 6; ++round) {
    steps *= 2;
    FlowResult next = flow(spec, x0, t1, steps);
    double change = 0.0;
    for (size_t i = 0; i < x0.size(); ++i)
      change = std::max(change, std::abs(next.endpoints[0][i] - prev.endpoints[0][i]));
    if (change < endpoint_tol) return next;
    prev = std::move(next);
  }
  return prev;
}

std::string trajectory_csv(const HamiltonianSpec& spec,
                           const std::vector<std::vector<double>>& samples, double t1,
                           int steps, int stride) {
  if (stride < 1) throw std::invalid_argument("trajectory stride must be >= 1");
  std::ostringstream out;
  out.precision(17);
  out << "sample,step,t";
  for (int i = 0; i < spec.n; ++i) out << ",q" << (i + 1);
  for (int i = 0; i < spec.n; ++i) out << ",p" << (i + 1);
  out << "\n";
  for (size_t s = 0; s < samples.size(); ++s) {
    const FlowResult fr = flow(spec, samples[s], t1, steps, true);
    const auto& traj = fr.trajectories[0];
    for (size_t k = 0; k < traj.size(); k += stride) {
      out << s << ',' << k << ',' << (t1 * static_cast<double>(k) / steps);
      for (double c : traj[k]) out << ',' << c;
      out << "\n";
    }
  }
  return out.str();
}

HoferNorm hofer_norm(const HamiltonianSpec& spec, const PhaseGrid& grid, int time_steps) {
  if (time_steps < 1) throw std::invalid_argument("hofer_norm requires time_steps >= 1");
  if (!grid.covers(spec.support_box))
    throw std::invalid_argument("hofer grid does not cover the support box");

  const size_t nodes = grid.node_count();
  bool exterior = false;
  std::vector<std::vector<double>> points(nodes);
  for (size_t k = 0; k < nodes; ++k) {
    points[k] = grid.node(k);
    if (!spec.support_box.contains(points[k])) exterior = true;
  }

  auto oscillation = [&](double s) {
    double mx = exterior ? 0.0 : -kInf;
    double mn = exterior ? 0.0 : kInf;
    for (const auto& x : points) {
      const double v = spec.evaluate(s, x);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    return mx - mn;
  };

  HoferNorm out;
  if (!spec.time_dependent) {
    out.value = oscillation(0.0);
    out.convergence_delta = 0.0;
    out.time_steps = 1;
    return out;
  }

  auto integrate = [&](int nt) {
    std::vector<double> terms;
    terms.reserve(nt + 1);
    for (int i = 0; i <= nt; ++i) {
      const double s = static_cast<double>(i) / nt;
      const double w = (i == 0 || i == nt) ? 0.5 : 1.0;
      terms.push_back(w * oscillation(s));
    }
    return pairwise_sum(std::move(terms)) / nt;
  };

  int nt = time_steps;
  double prev = integrate(nt);
  for (int round = 0; round < 10; ++round) {
    nt *= 2;
    const double cur = integrate(nt);
    const double delta = std::abs(cur - prev);
    if (delta <= 1e-3 * std::max(std::abs(cur), 1e-30)) {
      out.value = cur;
      out.convergence_delta = delta;
      out.time_steps = nt;
      return out;
    }
    prev = cur;
  }
  out.value = prev;
  out.convergence_delta = kInf;
  out.time_steps = nt;
  return out;
}

RegionTest darboux_ball_region(double r) {
  RegionTest t;
  t.name = "darboux-ball";
  t.clearance = [r](const std::vector<double>& x) {
    double norm2 = 0.0;
    for (double c : x) norm2 += c * c;
    return std::sqrt(norm2) - r;
  };
  return t;
}

std::string DisplacementCertificate::to_json() const {
  nlohmann::json j;
  j["verified"] = verified;
  j["hofer_value"] = hofer_value;
  j["margin"] = margin;
  nlohmann::json res;
  res["rk4_steps"] = rk4_steps;
  res["time_steps"] = time_steps;
  res["grid"] = grid_counts;
  res["hofer_delta"] = hofer_delta;
  res["min_clearance"] = min_clearance;
  j["resolutions"] = res;
  j["family_params"] = family_params;
  if (!verified) j["reason"] = reason;
  return j.dump();
}

DisplacementCertificate displaces(const HamiltonianSpec& spec,
                                  const std::vector<std::vector<double>>& a_samples,
                                  const RegionTest& b, double margin, int steps,
                                  const PhaseGrid& grid, int time_steps) {
  if (a_samples.empty()) throw std::invalid_argument("displaces requires samples");
  if (!(margin > 0)) throw std::invalid_argument("displaces requires margin > 0");

  DisplacementCertificate cert;
  cert.margin = margin;
  cert.rk4_steps = steps;
  for (const auto& a : grid.axes) cert.grid_counts.push_back(a.count);

  const HoferNorm hn = hofer_norm(spec, grid, time_steps);
  cert.hofer_value = hn.value;
  cert.hofer_delta = hn.convergence_delta;
  cert.time_steps = hn.time_steps;

  double min_clear = kInf;
  try {
    for (const auto& x0 : a_samples) {
      const FlowResult fr = flow(spec, x0, 1.0, steps);
      min_clear = std::min(min_clear, b.clearance(fr.endpoints[0]));
    }
  } catch (const std::exception& e) {
    cert.verified = false;
    cert.reason = e.what();
    return cert;
  }
  cert.min_clearance = min_clear;
  cert.verified = min_clear >= margin;
  if (!cert.verified) cert.reason = "image clearance below margin";
  return cert;
}

double plateau_bump(double x, double plateau, double shoulder) {
  const double a = std::abs(x);
  if (a <= plateau) return 1.0;
  if (a >= plateau + shoulder) return 0.0;
  const double t = (a - plateau) / shoulder;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

HamiltonianSpec vertical_shift_spec(double r, double kappa, double plateau,
                                    double shoulder, int n) {
  if (!(r > 0) || !(shoulder > 0) || n < 1)
    throw std::invalid_argument("vertical_shift_spec: bad parameters");
  if (plateau < r || plateau < kappa)
    throw std::invalid_argument(
        "vertical_shift_spec: plateau too small to cover the ball and the p-shift");
  HamiltonianSpec spec;
  spec.n = n;
  spec.time_dependent = false;
  spec.smoothness_note = "C1 plateau bump with cubic shoulders";
  const double extent = plateau + shoulder;
  spec.support_box.intervals.assign(2 * n, {-extent, extent});
  spec.evaluate = [kappa, plateau, shoulder, n](double, const std::vector<double>& x) {
    double bump = 1.0;
    for (int i = 0; i < 2 * n; ++i) bump *= plateau_bump(x[i], plateau, shoulder);
    return -kappa * x[0] * bump;
  };
  return spec;
}

GenFunReport verify_generating_function(int samples, double tolerance, int steps,
                                        uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need samples >= 1");
  HamiltonianSpec spec;
  spec.n = 1;
  spec.time_dependent = false;
  spec.support_box.intervals = {{-1e9, 1e9}, {-1e9, 1e9}};
  spec.evaluate = [](double, const std::vector<double>& x) {
    return x[0] * x[0] + x[1] * x[1];
  };

  const double delta = 1e-3;
  CounterRng rng(seed);
  GenFunReport report;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const double s = rng.uniform(delta, kPi / 2.0 - delta);
    const double q1 = rng.uniform(-1, 1);
    const double p1 = rng.uniform(-1, 1);
    const FlowResult fr = flow(spec, {q1, p1}, s, steps);
    const double q2 = fr.endpoints[0][0];
    const double p2 = fr.endpoints[0][1];
    const double sin2s = std::sin(2 * s), cos2s = std::cos(2 * s);
    const double ds_dq1 = (cos2s * q1 - q2) / sin2s;
    const double ds_dq2 = (cos2s * q2 - q1) / sin2s;
    report.max_residual_p1 = std::max(report.max_residual_p1, std::abs(p1 + ds_dq1));
    report.max_residual_p2 = std::max(report.max_residual_p2, std::abs(p2 - ds_dq2));
  }
  (void)tolerance;
  return report;
}

namespace {

std::vector<std::vector<double>> zero_section_samples(int n, double halfwidth, int count) {
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(2 * n, 0.0);
    x[0] = (count == 1) ? 0.0 : -halfwidth + 2.0 * halfwidth * i / (count - 1);
    samples.push_back(std::move(x));
  }
  return samples;
}

PhaseGrid capacity_grid(int n, double extent) {
  PhaseGrid grid;
  for (int i = 0; i < 2 * n; ++i) {
    PhaseGrid::Axis a;
    a.lo = -extent;
    a.hi = extent;
    a.count = (i == 0 || i == n) ? 201 : 21;
    grid.axes.push_back(a);
  }
  return grid;
}

DisplacementCertificate try_kappa(const CapacitySearch& s, double kappa) {
  // The plateau widens with kappa so the p-shift stays inside it.
  const double needed = kappa + 0.1 * s.r;
  const double plateau = (needed > s.plateau + 1e-9) ? needed : s.plateau;
  DisplacementCertificate cert;
  try {
    const HamiltonianSpec spec = vertical_shift_spec(s.r, kappa, plateau, s.shoulder, s.n);
    const PhaseGrid grid = capacity_grid(s.n, plateau + s.shoulder + 0.25);
    cert = displaces(spec, zero_section_samples(s.n, s.sample_halfwidth, s.sample_count),
                     darboux_ball_region(s.r), s.margin, s.rk4_steps, grid, s.time_steps);
  } catch (const std::exception& e) {
    cert.verified = false;
    cert.reason = e.what();
  }
  cert.family_params["kappa"] = kappa;
  cert.family_params["plateau"] = plateau;
  cert.family_params["shoulder"] = s.shoulder;
  cert.family_params["r"] = s.r;
  return cert;
}

}  // namespace

FamilySearchResult displacement_energy_upper(const CapacitySearch& search, int budget) {
  FamilySearchResult result;
  double best_kappa = 0.0;
  double highest_failed = 0.0;
  for (double kappa : search.kappa_grid) {
    if (result.evaluations >= budget) break;
    ++result.evaluations;
    DisplacementCertificate cert = try_kappa(search, kappa);
    if (cert.verified && cert.hofer_value < result.best) {
      result.best = cert.hofer_value;
      result.best_certificate = cert;
      result.found = true;
      best_kappa = kappa;
    } else if (!cert.verified) {
      highest_failed = std::max(highest_failed, kappa);
    }
    result.certificates.push_back(std::move(cert));
  }
  if (!result.found) return result;

  // Coordinate descent on kappa: the oscillation shrinks with kappa, so
  // bisect toward the verification boundary.
  double lo = highest_failed < best_kappa ? highest_failed : search.r;
  double hi = best_kappa;
  while (result.evaluations < budget && hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    ++result.evaluations;
    DisplacementCertificate cert = try_kappa(search, mid);
    const bool improved = cert.verified && cert.hofer_value < result.best;
    if (improved) {
      result.best = cert.hofer_value;
      result.best_certificate = cert;
      hi = mid;
    } else {
      lo = mid;
    }
    result.certificates.push_back(std::move(cert));
  }
  return result;
}

std::string StabilityReport::to_json() const {
  nlohmann::json j;
  j["distance"] = distance;
  j["hofer_norm"] = hofer;
  j["gap"] = gap;
  j["tolerance"] = tolerance;
  j["bound_holds"] = bound_holds;
  return j.dump();
}

StabilityReport stability_experiment(const std::function<double(double)>& v, double lo,
                                     double hi, int count, double plateau_lo,
                                     double plateau_hi, double shoulder, double p_extent,
                                     double tolerance) {
  if (count < 2 || !(hi > lo)) throw std::invalid_argument("bad sampling grid");
  if (plateau_lo > lo + 1e-12 || plateau_hi < hi - 1e-12)
    throw std::invalid_argument("plateau smaller than the sampled grid");

  const EpigraphSheaf sampled = EpigraphSheaf::sample_1d(v, lo, hi, count);
  EpigraphSheaf zero = sampled;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);

  StabilityReport report;
  report.tolerance = tolerance;
  report.distance = epigraph_distance(zero, sampled);

  // H(q, p) = V(q) wq(q) wp(p); wq is 1 exactly on [plateau_lo, plateau_hi].
  HamiltonianSpec spec;
  spec.n = 1;
  spec.time_dependent = false;
  const double mid_q = 0.5 * (plateau_lo + plateau_hi);
  const double half_q = 0.5 * (plateau_hi - plateau_lo);
  spec.support_box.intervals = {{plateau_lo - shoulder, plateau_hi + shoulder},
                                {-p_extent - shoulder, p_extent + shoulder}};
  spec.evaluate = [=](double, const std::vector<double>& x) {
    return v(x[0]) * plateau_bump(x[0] - mid_q, half_q, shoulder) *
           plateau_bump(x[1], p_extent, shoulder);
  };

  // Extend the sampling grid by whole steps so its nodes stay exactly on
  // the V grid while covering the shoulders.
  const double spacing = (hi - lo) / (count - 1);
  const int pad = static_cast<int>(std::ceil(shoulder / spacing)) + 1;
  PhaseGrid grid;
  grid.axes.push_back({lo - pad * spacing, hi + pad * spacing, count + 2 * pad});
  grid.axes.push_back({-p_extent - shoulder, p_extent + shoulder, 9});

  const HoferNorm hn = hofer_norm(spec, grid, 4);
  report.hofer = hn.value;
  report.gap = hn.value - report.distance;
  report.bound_holds = report.distance <= hn.value + tolerance;
  return report;
}

}  // namespace sheafenergy
