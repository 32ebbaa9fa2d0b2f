#ifndef SHEAFENERGY_GF2_HPP
#define SHEAFENERGY_GF2_HPP

#include <cstdint>
#include <vector>

namespace sheafenergy {

/// Dense matrix over the field with two elements. Rows are packed into
/// 64-bit words. All exact linear algebra in the toolkit (hom spaces,
/// tau ranks, limit/colimit ranks, interleaving witnesses) runs through
/// this type.
class Gf2Matrix {
public:
  Gf2Matrix() = default;
  Gf2Matrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const;
  void set(int r, int c, bool v);
  void flip(int r, int c);

  /// rows() x (cols() + other.cols()) block matrix [this | other].
  Gf2Matrix augment(const Gf2Matrix& other) const;
  /// (rows() + below.rows()) x cols() block matrix [this ; below].
  Gf2Matrix stack(const Gf2Matrix& below) const;

  Gf2Matrix transposed() const;
  Gf2Matrix multiply(const Gf2Matrix& rhs) const;

  int rank() const;

  /// Basis of the null space, one kernel vector per returned row.
  Gf2Matrix kernel_basis() const;

  /// Solves this * x = b for one x. Returns false when inconsistent.
  bool solve(const std::vector<uint8_t>& b, std::vector<uint8_t>& x) const;

  bool is_zero() const;
  void add_row_into(int src, int dst);

private:
  int rows_ = 0;
  int cols_ = 0;
  int words_ = 0;
  std::vector<uint64_t> data_;

  uint64_t* row_ptr(int r) { return data_.data() + static_cast<size_t>(r) * words_; }
  const uint64_t* row_ptr(int r) const { return data_.data() + static_cast<size_t>(r) * words_; }
};

/// rank([A | B]) - rank(B): dimension of the image of A's column space in
/// the quotient by B's column space.
int rank_modulo(const Gf2Matrix& a_cols, const Gf2Matrix& b_cols);

}  // namespace sheafenergy

#endif
