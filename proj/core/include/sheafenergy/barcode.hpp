#ifndef SHEAFENERGY_BARCODE_HPP
#define SHEAFENERGY_BARCODE_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sheafenergy/rational.hpp"

namespace sheafenergy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance for comparing floating interval endpoints.
inline constexpr double kEndpointTol = 1e-12;

/// Graded half-open interval [birth, death) with death in (birth, +inf].
/// A shift written [m] on the interval object lowers the stored degree by
/// m (cohomological convention, fixed once for the whole toolkit).
struct Bar {
  double birth = 0.0;
  double death = kInf;
  int degree = 0;
  int multiplicity = 1;

  // Exact endpoints, carried only for serialization round trips.
  std::optional<Rational> birth_exact;
  std::optional<Rational> death_exact;

  Bar() = default;
  Bar(double b, double d, int deg = 0, int mult = 1);

  bool is_ray() const { return death == kInf; }
  /// death - birth; +inf for rays.
  double length() const { return death - birth; }
};

bool operator==(const Bar& a, const Bar& b);

/// Finite multiset of bars kept in a canonical order (birth, death,
/// degree), with equal bars merged into one entry via multiplicity. The
/// empty barcode stands for the zero object.
class Barcode {
public:
  Barcode() = default;
  explicit Barcode(std::vector<Bar> bars);

  static Barcode single(double birth, double death, int degree = 0, int mult = 1);

  const std::vector<Bar>& bars() const { return bars_; }
  bool empty() const { return bars_.empty(); }

  void add(Bar bar);

  /// Total number of bar slots counted with multiplicity.
  int total_multiplicity() const;

  bool has_ray() const;

  /// Largest finite length, +inf when a ray is present, 0 when empty.
  double max_length() const;

  /// Exact multiset equality (endpoints compared as doubles).
  friend bool operator==(const Barcode& a, const Barcode& b);

  /// Multiset equality with endpoint slack, for float-derived barcodes.
  bool approx_equal(const Barcode& other, double tol) const;

  std::string to_json() const;
  static Barcode from_json(const std::string& text);

private:
  std::vector<Bar> bars_;
  void canonicalize();
};

}  // namespace sheafenergy

#endif
