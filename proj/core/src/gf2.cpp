#include "sheafenergy/gf2.hpp"

#include <cassert>
#include <stdexcept>

namespace sheafenergy {

Gf2Matrix::Gf2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64),
      data_(static_cast<size_t>(rows) * ((cols + 63) / 64), 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
}

bool Gf2Matrix::get(int r, int c) const {
  assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
  return (row_ptr(r)[c >> 6] >> (c & 63)) & 1u;
}

void Gf2Matrix::set(int r, int c, bool v) {
  assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
  uint64_t mask = uint64_t{1} << (c & 63);
  if (v)
    row_ptr(r)[c >> 6] |= mask;
  else
    row_ptr(r)[c >> 6] &= ~mask;
}

void Gf2Matrix::flip(int r, int c) { set(r, c, !get(r, c)); }

void Gf2Matrix::add_row_into(int src, int dst) {
  const uint64_t* s = row_ptr(src);
  uint64_t* d = row_ptr(dst);
  for (int w = 0; w < words_; ++w) d[w] ^= s[w];
}

Gf2Matrix Gf2Matrix::augment(const Gf2Matrix& other) const {
  assert(rows_ == other.rows_);
  Gf2Matrix out(rows_, cols_ + other.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(r, c, true);
    for (int c = 0; c < other.cols_; ++c)
      if (other.get(r, c)) out.set(r, cols_ + c, true);
  }
  return out;
}

Gf2Matrix Gf2Matrix::stack(const Gf2Matrix& below) const {
  assert(cols_ == below.cols_);
  Gf2Matrix out(rows_ + below.rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(r, c, true);
  for (int r = 0; r < below.rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (below.get(r, c)) out.set(rows_ + r, c, true);
  return out;
}

Gf2Matrix Gf2Matrix::transposed() const {
  Gf2Matrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r, true);
  return out;
}

Gf2Matrix Gf2Matrix::multiply(const Gf2Matrix& rhs) const {
  assert(cols_ == rhs.rows_);
  Gf2Matrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k)
      if (get(r, k)) {
        const uint64_t* s = rhs.row_ptr(k);
        uint64_t* d = out.row_ptr(r);
        for (int w = 0; w < out.words_; ++w) d[w] ^= s[w];
      }
  return out;
}

int Gf2Matrix::rank() const {
  Gf2Matrix work = *this;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (work.get(r, c)) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int w = 0; w < words_; ++w)
        std::swap(work.row_ptr(pivot)[w], work.row_ptr(rank)[w]);
    for (int r = 0; r < rows_; ++r)
      if (r != rank && work.get(r, c)) work.add_row_into(rank, r);
    ++rank;
  }
  return rank;
}

Gf2Matrix Gf2Matrix::kernel_basis() const {
  Gf2Matrix work = *this;
  int rank = 0;
  std::vector<int> pivot_cols;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (work.get(r, c)) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int w = 0; w < words_; ++w)
        std::swap(work.row_ptr(pivot)[w], work.row_ptr(rank)[w]);
    for (int r = 0; r < rows_; ++r)
      if (r != rank && work.get(r, c)) work.add_row_into(rank, r);
    pivot_cols.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivot_cols) is_pivot[c] = true;

  Gf2Matrix basis(cols_ - rank, cols_);
  int out = 0;
  for (int free_c = 0; free_c < cols_; ++free_c) {
    if (is_pivot[free_c]) continue;
    basis.set(out, free_c, true);
    for (int pr = 0; pr < rank; ++pr)
      if (work.get(pr, free_c)) basis.set(out, pivot_cols[pr], true);
    ++out;
  }
  return basis;
}

bool Gf2Matrix::solve(const std::vector<uint8_t>& b, std::vector<uint8_t>& x) const {
  assert(static_cast<int>(b.size()) == rows_);
  Gf2Matrix work(rows_, cols_ + 1);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) work.set(r, c, true);
    if (b[r]) work.set(r, cols_, true);
  }
  std::vector<int> pivot_cols;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (work.get(r, c)) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int w = 0; w < work.words_; ++w)
        std::swap(work.row_ptr(pivot)[w], work.row_ptr(rank)[w]);
    for (int r = 0; r < rows_; ++r)
      if (r != rank && work.get(r, c)) work.add_row_into(rank, r);
    pivot_cols.push_back(c);
    ++rank;
  }
  for (int r = rank; r < rows_; ++r)
    if (work.get(r, cols_)) return false;
  x.assign(cols_, 0);
  for (int pr = 0; pr < rank; ++pr)
    if (work.get(pr, cols_)) x[pivot_cols[pr]] = 1;
  return true;
}

bool Gf2Matrix::is_zero() const {
  for (uint64_t w : data_)
    if (w) return false;
  return true;
}

int rank_modulo(const Gf2Matrix& a_cols, const Gf2Matrix& b_cols) {
  if (a_cols.rows() != b_cols.rows())
    throw std::invalid_argument("rank_modulo: row mismatch");
  return a_cols.augment(b_cols).rank() - b_cols.rank();
}

}  // namespace sheafenergy
