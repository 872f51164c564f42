#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leosb {

using Complex = std::complex<double>;

/// Divisors at or below this magnitude are treated as literal zeros.
inline constexpr double kDivisorFloor = 1e-300;
/// Relative tolerance of the right pseudo-inverse.
inline constexpr double kPinvTolerance = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateDivisorError : public std::domain_error {
 public:
  DegenerateDivisorError(std::size_t row, std::size_t col);
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(std::size_t effective_rank, std::size_t rows);
  std::size_t effective_rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// Dense complex matrix, row-major, indexed as (row, col).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {});
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix ones(std::size_t rows, std::size_t cols);
  static ComplexMatrix row_vector(std::span<const Complex> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;
  /// Columns [first, first + count).
  ComplexMatrix col_range(std::size_t first, std::size_t count) const;
  /// Rows [first, first + count).
  ComplexMatrix row_range(std::size_t first, std::size_t count) const;

  double frobenius_norm2() const noexcept;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

std::string shape_of(const ComplexMatrix& m);

/// Matrix product. Large products are split across OpenMP threads unless
/// the caller is already inside a parallel region.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix hadamard_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard_div(const ComplexMatrix& a, const ComplexMatrix& b,
                           double divisor_floor = kDivisorFloor);

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

/// [a, b] side by side.
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);
/// [a; b] stacked.
ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b);

/// out[i * v.size() + j] = u[i] * v[j]
std::vector<Complex> kronecker(std::span<const Complex> u, std::span<const Complex> v);

/// Moore-Penrose right inverse of a K x M matrix with K <= M.
///
/// The common path solves the K x K Hermitian system A A^H through a
/// Cholesky factorization. When the factorization breaks down or its
/// pivots suggest cond(A A^H) > 1/tol, an SVD pseudo-inverse with cutoff
/// tol * sigma_max is used instead; fewer than K retained singular values
/// raise RankDeficientError.
ComplexMatrix right_pinv(const ComplexMatrix& a, double tol = kPinvTolerance);

/// SVD-only pseudo-inverse (the fallback path of right_pinv).
ComplexMatrix svd_right_pinv(const ComplexMatrix& a, double tol = kPinvTolerance);

/// 2-norm condition number of a Hermitian positive semi-definite matrix.
double hermitian_condition(const ComplexMatrix& g);

namespace reference {
/// Single-threaded textbook triple loop; kept for tests and benchmarks.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
}  // namespace reference

}  // namespace leosb
