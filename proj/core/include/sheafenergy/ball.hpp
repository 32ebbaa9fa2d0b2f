#ifndef SHEAFENERGY_BALL_HPP
#define SHEAFENERGY_BALL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sheafenergy/barcode.hpp"

namespace sheafenergy {

/// Stationary times of s |-> f(s)(q1, q2) on [0, pi/2], the roots of the
/// critical quadratic in xi = cos(2s).
struct CriticalTimes {
  enum class Degenerate : uint8_t { none = 0, diagonal_limit, antidiagonal_limit, origin };

  double s1 = 0.0;  // in [0, pi/2], s1 <= s2
  double s2 = 0.0;
  bool exists = false;
  Degenerate degenerate = Degenerate::none;
};

const char* to_string(CriticalTimes::Degenerate d);

/// Generating function of the time-s flow of F(q,p) = q^2 + p^2:
///   S_s(q1, q2) = cos(2s)/(2 sin(2s)) (q1^2 + q2^2) - q1 q2 / sin(2s),
/// defined for 0 < s < pi/2.
double generating_function(double s, double q1, double q2);

/// f(s)(q1, q2) = -S_s(q1, q2) - s r^2.
double f_value(double s, double q1, double q2, double r);

/// One-sided limit of f at s -> 0+ or s -> pi/2-, by Richardson
/// extrapolation at eps and 2 eps. Validates the closed-form degenerate
/// values used on the diagonal and antidiagonal.
double f_endpoint_limit(bool at_zero, double q1, double q2, double r, double eps = 1e-5);

/// Critical times at a point of N = [-r, r]^2. The discriminant identity
///   (q1 q2)^2 - r^2 (q1^2 + q2^2 - r^2) = (r^2 - q1^2)(r^2 - q2^2)
/// feeds the root formula; roots within 1e-12 of [-1, 1] are clamped,
/// farther outside means exists = false. Throws outside N.
CriticalTimes critical_times(double q1, double q2, double r);

/// f(s1) and f(s2) at one point of N. Critical times at the interval ends
/// take the degenerate closed forms: 0 at s -> 0 (diagonal side) and
/// -(pi/2) r^2 at s -> pi/2 (antidiagonal side).
struct SigmaBounds {
  double f1 = 0.0;
  double f2 = 0.0;
  CriticalTimes times;
};

SigmaBounds sigma_bounds(double q1, double q2, double r);

/// The two bound functions of the region Sigma over a grid on N, with
/// degeneracy bookkeeping. Node (i, j) sits at (coord(i), coord(j)),
/// row-major with j fastest; odd node counts place the origin exactly.
struct SigmaField {
  double r = 1.0;
  int n = 1;           // ambient dimension, bookkeeping for degree shifts
  int nodes = 101;     // per axis, odd
  std::vector<double> coords;
  std::vector<double> f1, f2;
  std::vector<uint8_t> exists;
  std::vector<uint8_t> degenerate;  // CriticalTimes::Degenerate

  int index(int i, int j) const { return i * nodes + j; }
  int origin_index() const { return index((nodes - 1) / 2, (nodes - 1) / 2); }
};

/// Samples f(s1), f(s2) over an odd x odd grid on N. f2 <= f1 is asserted
/// node-wise. Throws when the node count is even or below 3.
SigmaField sigma_field(double r, int n, int nodes);

/// Fiber of k_Sigma over one node: the bar [f2, f1) in degree 0, or the
/// empty barcode on degenerate zero-length fibers.
Barcode fiber_restrict(const SigmaField& field, int i, int j);

/// Fiberwise graded data of the ball projector on one periodicity window:
/// the Sigma layer translated by m (pi/2) r^2 with degree offset -m n, and
/// the reflected layer one half-period later.
struct ProjectorWindow {
  int m = 0;
  SigmaField field;
};

ProjectorWindow projector_window(const SigmaField& field, int m);

/// Both graded layers of the window at one node.
Barcode fiber_restrict(const ProjectorWindow& window, int i, int j);

/// CSV rows (q1, q2, f1, f2, exists, degenerate) in lexicographic node
/// order under a fixed header.
std::string sigma_field_csv(const SigmaField& field);

}  // namespace sheafenergy

#endif
