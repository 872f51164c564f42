#include "leosb/numerics.hpp"

#include <Eigen/Dense>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace leosb {

namespace {

// Below this many multiply-adds a product is not worth a thread team.
constexpr std::size_t kParallelMatmulWork = std::size_t{1} << 18;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
}

void require_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ " + shape_of(a) + " x " + shape_of(b));
  }
}

using RowMajorXcd = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorXcd> as_eigen(const ComplexMatrix& m) {
  return {m.values().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

// In-place lower Cholesky factor of a Hermitian matrix. Returns false on a
// non-positive pivot.
bool cholesky_lower(ComplexMatrix& g) {
  const std::size_t n = g.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(g(j, k));
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    g(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= g(i, k) * std::conj(g(j, k));
      g(i, j) = s / ljj;
    }
    for (std::size_t i = 0; i < j; ++i) g(i, j) = 0.0;
  }
  return true;
}

// Solves (L L^H) X = B column by column; L lower triangular.
void cholesky_solve(const ComplexMatrix& l, ComplexMatrix& b) {
  const std::size_t n = l.rows();
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b(k, c);
      b(i, c) = s / l(i, i).real();
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = b(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * b(k, c);
      b(i, c) = s / l(i, i).real();
    }
  }
}

}  // namespace

DegenerateDivisorError::DegenerateDivisorError(std::size_t row, std::size_t col)
    : std::domain_error("hadamard_div: degenerate divisor at (" + std::to_string(row) + ", " +
                        std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

RankDeficientError::RankDeficientError(std::size_t effective_rank, std::size_t rows)
    : std::runtime_error("right_pinv: matrix is numerically rank deficient (effective rank " +
                         std::to_string(effective_rank) + " of " + std::to_string(rows) + ")"),
      rank_(effective_rank) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::ones(std::size_t rows, std::size_t cols) { return {rows, cols, Complex{1.0, 0.0}}; }

ComplexMatrix ComplexMatrix::row_vector(std::span<const Complex> values) {
  ComplexMatrix m(1, values.size());
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

ComplexMatrix ComplexMatrix::col_range(std::size_t first, std::size_t count) const {
  if (first + count > cols_) {
    throw DimensionError("col_range: columns [" + std::to_string(first) + ", " + std::to_string(first + count) +
                         ") out of " + shape_of(*this));
  }
  ComplexMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + first), count,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * count));
  return out;
}

ComplexMatrix ComplexMatrix::row_range(std::size_t first, std::size_t count) const {
  if (first + count > rows_) {
    throw DimensionError("row_range: rows [" + std::to_string(first) + ", " + std::to_string(first + count) +
                         ") out of " + shape_of(*this));
  }
  ComplexMatrix out(count, cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_), count * cols_, out.data_.begin());
  return out;
}

double ComplexMatrix::frobenius_norm2() const noexcept {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

std::string shape_of(const ComplexMatrix& m) {
  std::ostringstream os;
  os << '(' << m.rows() << "x" << m.cols() << ')';
  return os.str();
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_inner(a, b);
  const std::size_t n = a.rows();
  const std::size_t inner = a.cols();
  const std::size_t m = b.cols();
  ComplexMatrix out(n, m);
  const bool go_parallel = n * inner * m >= kParallelMatmulWork && !omp_in_parallel();

#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    // std::complex is layout-compatible with double[2]; spelling the product
    // out in reals skips the NaN-recovery call and lets the loop vectorize.
    double* o = reinterpret_cast<double*>(out.row(static_cast<std::size_t>(i)).data());
    const auto a_row = a.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < inner; ++k) {
      const double ar = a_row[k].real(), ai = a_row[k].imag();
      const double* bk = reinterpret_cast<const double*>(b.row(k).data());
      for (std::size_t j = 0; j < m; ++j) {
        const double br = bk[2 * j], bi = bk[2 * j + 1];
        o[2 * j] += ar * br - ai * bi;
        o[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
  return out;
}

namespace reference {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_inner(a, b);
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}
}  // namespace reference

ComplexMatrix hadamard_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard_mul");
  ComplexMatrix out(a.rows(), a.cols());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

ComplexMatrix hadamard_div(const ComplexMatrix& a, const ComplexMatrix& b, double divisor_floor) {
  require_same_shape(a, b, "hadamard_div");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const Complex d = b(r, c);
      if (!(std::abs(d) > divisor_floor)) throw DegenerateDivisorError(r, c);
      out(r, c) = a(r, c) / d;
    }
  }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator+");
  ComplexMatrix out = a;
  auto o = out.values();
  auto y = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += y[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "operator-");
  ComplexMatrix out = a;
  auto o = out.values();
  auto y = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= y[i];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& v : out.values()) v *= s;
  return out;
}

ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ " + shape_of(a) + " vs " + shape_of(b));
  ComplexMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ " + shape_of(a) + " vs " + shape_of(b));
  ComplexMatrix out(a.rows() + b.rows(), a.cols());
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(), out.values().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

std::vector<Complex> kronecker(std::span<const Complex> u, std::span<const Complex> v) {
  std::vector<Complex> out;
  out.reserve(u.size() * v.size());
  for (const Complex ui : u)
    for (const Complex vj : v) out.push_back(ui * vj);
  return out;
}

ComplexMatrix svd_right_pinv(const ComplexMatrix& a, double tol) {
  if (a.rows() > a.cols()) {
    throw DimensionError("right_pinv: expected K <= M, got " + shape_of(a));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(as_eigen(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol * (sigma.size() > 0 ? sigma(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++rank;
  if (rank < a.rows()) throw RankDeficientError(rank, a.rows());

  const Eigen::MatrixXcd pinv =
      svd.matrixV() * sigma.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c)
      out(r, c) = pinv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

ComplexMatrix right_pinv(const ComplexMatrix& a, double tol) {
  if (a.rows() > a.cols()) {
    throw DimensionError("right_pinv: expected K <= M, got " + shape_of(a));
  }
  if (a.empty()) throw DimensionError("right_pinv: empty matrix");

  // A^+ = A^H (A A^H)^{-1} = ((A A^H)^{-1} A)^H
  ComplexMatrix gram = matmul(a, a.adjoint());
  if (cholesky_lower(gram)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
      lo = std::min(lo, gram(i, i).real());
      hi = std::max(hi, gram(i, i).real());
    }
    const double cond_estimate = (hi / lo) * (hi / lo);
    if (cond_estimate <= 1.0 / tol) {
      ComplexMatrix x = a;
      cholesky_solve(gram, x);
      return x.adjoint();
    }
  }
  return svd_right_pinv(a, tol);
}

double hermitian_condition(const ComplexMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("hermitian_condition: not square " + shape_of(g));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(as_eigen(g), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace leosb
