#pragma once
// Dense column-major helpers for small least-squares problems (tall n x p,
// p in the tens at most).

#include <cstddef>
#include <span>
#include <vector>

namespace pctcoef::linalg {

/// Column-major matrix; column j occupies data[j*rows, (j+1)*rows).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// In-place Householder QR of an n x p matrix (n >= p). On return the upper
/// triangle holds R; `rhs` is overwritten with Q^T rhs.
void householder_qr(Matrix& a, std::span<double> rhs);

/// Solves R x = b for the leading p x p upper triangle of `r`.
std::vector<double> solve_upper(const Matrix& r, std::span<const double> b);

struct SvdResult {
  std::vector<double> singular_values;  ///< descending
  Matrix v;                             ///< right singular vectors, as columns
};

/// One-sided Jacobi SVD of a small square or tall matrix.
SvdResult jacobi_svd(Matrix a);

}  // namespace pctcoef::linalg
