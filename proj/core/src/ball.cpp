#include "sheafenergy/ball.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sheafenergy {

namespace {

const double kPi = std::acos(-1.0);
const double kHalfPi = kPi / 2.0;

/// Critical times this close to the interval ends are handled by the
/// degenerate closed forms (diagonal, antidiagonal, origin).
constexpr double kDegenerateS = 1e-8;
constexpr double kClampTol = 1e-12;

}  // namespace

const char* to_string(CriticalTimes::Degenerate d) {
  switch (d) {
    case CriticalTimes::Degenerate::none: return "none";
    case CriticalTimes::Degenerate::diagonal_limit: return "diagonal-limit";
    case CriticalTimes::Degenerate::antidiagonal_limit: return "antidiagonal-limit";
    case CriticalTimes::Degenerate::origin: return "origin";
  }
  return "none";
}

double generating_function(double s, double q1, double q2) {
  if (!(s > 0.0) || !(s < kHalfPi))
    throw std::domain_error("generating_function requires 0 < s < pi/2");
  const double sin2s = std::sin(2.0 * s);
  const double cos2s = std::cos(2.0 * s);
  return cos2s / (2.0 * sin2s) * (q1 * q1 + q2 * q2) - q1 * q2 / sin2s;
}

double f_value(double s, double q1, double q2, double r) {
  return -generating_function(s, q1, q2) - s * r * r;
}

double f_endpoint_limit(bool at_zero, double q1, double q2, double r, double eps) {
  auto at = [&](double e) {
    const double s = at_zero ? e : kHalfPi - e;
    return f_value(s, q1, q2, r);
  };
  return 2.0 * at(eps) - at(2.0 * eps);
}

CriticalTimes critical_times(double q1, double q2, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("critical_times requires r > 0");
  if (std::abs(q1) > r + kClampTol || std::abs(q2) > r + kClampTol)
    throw std::invalid_argument("point outside N = [-r, r]^2");

  const double r2 = r * r;
  // Discriminant identity: (q1 q2)^2 - r^2(q1^2 + q2^2 - r^2) = (r^2-q1^2)(r^2-q2^2).
  const double disc = (r2 - q1 * q1) * (r2 - q2 * q2);
  const double root = std::sqrt(std::max(disc, 0.0));

  CriticalTimes out;
  double xi_plus = (q1 * q2 + root) / r2;
  double xi_minus = (q1 * q2 - root) / r2;
  if (xi_plus > 1.0 + kClampTol || xi_minus < -1.0 - kClampTol ||
      xi_plus < -1.0 - kClampTol || xi_minus > 1.0 + kClampTol) {
    out.exists = false;
    return out;
  }
  xi_plus = std::min(1.0, std::max(-1.0, xi_plus));
  xi_minus = std::min(1.0, std::max(-1.0, xi_minus));

  out.exists = true;
  out.s1 = 0.5 * std::acos(xi_plus);   // acos is decreasing: s1 <= s2
  out.s2 = 0.5 * std::acos(xi_minus);
  const bool diag = out.s1 < kDegenerateS;
  const bool anti = out.s2 > kHalfPi - kDegenerateS;
  if (diag && anti)
    out.degenerate = CriticalTimes::Degenerate::origin;
  else if (diag)
    out.degenerate = CriticalTimes::Degenerate::diagonal_limit;
  else if (anti)
    out.degenerate = CriticalTimes::Degenerate::antidiagonal_limit;
  return out;
}

SigmaBounds sigma_bounds(double q1, double q2, double r) {
  SigmaBounds out;
  out.times = critical_times(q1, q2, r);
  if (!out.times.exists) return out;
  // Degenerate ends take the closed forms: f -> 0 along the diagonal as
  // s -> 0, f -> -(pi/2) r^2 along the antidiagonal as s -> pi/2. Both
  // roots collapse to one end on the boundary of N.
  auto eval = [&](double s) {
    if (s < kDegenerateS) return 0.0;
    if (s > kHalfPi - kDegenerateS) return -kHalfPi * r * r;
    return f_value(s, q1, q2, r);
  };
  out.f1 = eval(out.times.s1);
  out.f2 = eval(out.times.s2);
  return out;
}

SigmaField sigma_field(double r, int n, int nodes) {
  if (!(r > 0.0)) throw std::invalid_argument("sigma_field requires r > 0");
  if (n < 1) throw std::invalid_argument("sigma_field requires n >= 1");
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("sigma_field grid needs an odd node count >= 3");

  SigmaField field;
  field.r = r;
  field.n = n;
  field.nodes = nodes;
  field.coords.resize(nodes);
  for (int i = 0; i < nodes; ++i)
    field.coords[i] = r * static_cast<double>(2 * i - (nodes - 1)) / (nodes - 1);

  const int total = nodes * nodes;
  field.f1.assign(total, 0.0);
  field.f2.assign(total, 0.0);
  field.exists.assign(total, 0);
  field.degenerate.assign(total, 0);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) {
      const SigmaBounds v = sigma_bounds(field.coords[i], field.coords[j], r);
      const int at = field.index(i, j);
      field.exists[at] = v.times.exists ? 1 : 0;
      field.degenerate[at] = static_cast<uint8_t>(v.times.degenerate);
      field.f1[at] = v.f1;
      field.f2[at] = v.f2;
      if (v.times.exists && !(v.f2 <= v.f1 + 1e-12))
        throw std::logic_error("sigma_field violates f(s2) <= f(s1)");
    }
  return field;
}

Barcode fiber_restrict(const SigmaField& field, int i, int j) {
  if (i < 0 || i >= field.nodes || j < 0 || j >= field.nodes)
    throw std::invalid_argument("node off the sigma grid");
  const int at = field.index(i, j);
  if (!field.exists[at]) return Barcode{};
  const double f1 = field.f1[at], f2 = field.f2[at];
  if (!(f2 < f1 - 1e-15)) return Barcode{};  // zero-length fiber
  return Barcode::single(f2, f1, 0);
}

ProjectorWindow projector_window(const SigmaField& field, int m) {
  return ProjectorWindow{m, field};
}

Barcode fiber_restrict(const ProjectorWindow& window, int i, int j) {
  const SigmaField& field = window.field;
  const double tau = (std::acos(-1.0) / 2.0) * field.r * field.r;
  const int m = window.m;
  std::vector<Bar> bars;
  // Sigma layer, translated by m tau with degree offset -m n.
  const Barcode sigma = fiber_restrict(field, i, j);
  for (const Bar& b : sigma.bars()) {
    Bar t = b;
    t.birth += m * tau;
    t.death += m * tau;
    t.degree = b.degree - m * field.n;
    bars.push_back(t);
  }
  // Reflected layer Psi(Sigma), a further half period along with one more
  // degree shift; Psi reflects (q1, q2) -> (q1, -q2).
  const int j_reflected = field.nodes - 1 - j;
  const Barcode mirrored = fiber_restrict(field, i, j_reflected);
  for (const Bar& b : mirrored.bars()) {
    Bar t = b;
    t.birth += (m + 1) * tau;
    t.death += (m + 1) * tau;
    t.degree = b.degree - (m + 1) * field.n;
    bars.push_back(t);
  }
  return Barcode(std::move(bars));
}

std::string sigma_field_csv(const SigmaField& field) {
  std::ostringstream out;
  out.precision(17);
  out << "q1,q2,f1,f2,exists,degenerate\n";
  for (int i = 0; i < field.nodes; ++i)
    for (int j = 0; j < field.nodes; ++j) {
      const int at = field.index(i, j);
      out << field.coords[i] << ',' << field.coords[j] << ',' << field.f1[at] << ','
          << field.f2[at] << ',' << static_cast<int>(field.exists[at]) << ','
          << to_string(static_cast<CriticalTimes::Degenerate>(field.degenerate[at]))
          << '\n';
    }
  return out.str();
}

}  // namespace sheafenergy
