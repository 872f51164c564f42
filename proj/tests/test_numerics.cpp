#include "leosb/numerics.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace leosb;
using namespace leosb::testing;
using namespace std::complex_literals;

namespace {

void check_moore_penrose(const ComplexMatrix& a, const ComplexMatrix& p, double tol) {
  const ComplexMatrix ap = matmul(a, p), pa = matmul(p, a);
  CHECK(rel_frobenius(matmul(ap, a), a) < tol);
  CHECK(rel_frobenius(matmul(pa, p), p) < tol);
  CHECK(std::sqrt((ap - ap.adjoint()).frobenius_norm2() / ap.frobenius_norm2()) < tol);
  CHECK(std::sqrt((pa - pa.adjoint()).frobenius_norm2() / pa.frobenius_norm2()) < tol);
}

}  // namespace

TEST_CASE("matmul examples") {
  RandomStream rng(7);
  const ComplexMatrix b = random_matrix(rng, 2, 5);
  CHECK(matmul(ComplexMatrix::identity(2), b) == b);

  const ComplexMatrix row{{1.0, 1i}};
  const ComplexMatrix col{{1.0}, {1i}};
  const ComplexMatrix out = matmul(row, col);
  REQUIRE(out.rows() == 1);
  REQUIRE(out.cols() == 1);
  CHECK(std::abs(out(0, 0)) == 0.0);

  CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(4, 2)), DimensionError);
}

TEST_CASE("matmul parallel kernel agrees with the serial reference") {
  RandomStream rng(11);
  for (std::size_t n : {1u, 7u, 64u, 150u}) {
    const ComplexMatrix a = random_matrix(rng, n, n + 3), b = random_matrix(rng, n + 3, n);
    CHECK(max_abs_diff(matmul(a, b), reference::matmul(a, b)) < 1e-10);
  }
}

TEST_CASE("matmul associativity") {
  RandomStream rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_matrix(rng, 8, 8), b = random_matrix(rng, 8, 8), c = random_matrix(rng, 8, 8);
    CHECK(rel_frobenius(matmul(matmul(a, b), c), matmul(a, matmul(b, c))) < 1e-10);
  }
}

TEST_CASE("hadamard_mul examples") {
  RandomStream rng(5);
  const ComplexMatrix a = random_matrix(rng, 3, 4);
  CHECK(hadamard_mul(a, ComplexMatrix::ones(3, 4)) == a);
  const ComplexMatrix out = hadamard_mul(ComplexMatrix{{2.0, 1i}}, ComplexMatrix{{3.0, -1i}});
  CHECK(out == ComplexMatrix{{6.0, 1.0}});
  CHECK_THROWS_AS(hadamard_mul(ComplexMatrix(2, 2), ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("hadamard_div examples") {
  RandomStream rng(6);
  const ComplexMatrix a = random_matrix(rng, 4, 3);
  CHECK(max_abs_diff(hadamard_div(a, a), ComplexMatrix::ones(4, 3)) < 1e-15);
  const ComplexMatrix out = hadamard_div(ComplexMatrix{{6.0, 1.0}}, ComplexMatrix{{3.0, -1i}});
  CHECK(max_abs_diff(out, ComplexMatrix{{2.0, 1i}}) < 1e-15);

  ComplexMatrix b = ComplexMatrix::ones(2, 2);
  b(1, 0) = 0.0;
  try {
    hadamard_div(ComplexMatrix::ones(2, 2), b);
    FAIL("expected DegenerateDivisorError");
  } catch (const DegenerateDivisorError& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 0);
  }
}

TEST_CASE("kronecker examples") {
  const std::vector<Complex> v{2.0 + 1i, -3.0, 0.5i};
  const std::vector<Complex> one{1.0};
  CHECK(kronecker(one, v) == v);
  const std::vector<Complex> u{1.0, -1.0}, w{1.0, 1i};
  CHECK(kronecker(u, w) == std::vector<Complex>{1.0, 1i, -1.0, -1i});
  const std::vector<Complex> a{3.0 - 1i}, b{2i};
  CHECK(kronecker(a, b) == std::vector<Complex>{(3.0 - 1i) * 2i});
  for (std::size_t m = 0; m < 5; ++m)
    for (std::size_t n = 0; n < 5; ++n)
      CHECK(kronecker(std::vector<Complex>(m, 1.0), std::vector<Complex>(n, 1.0)).size() == m * n);
}

TEST_CASE("right_pinv examples") {
  CHECK(max_abs_diff(right_pinv(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)) < 1e-15);
  CHECK(max_abs_diff(right_pinv(ComplexMatrix{{1.0, 1.0}}), ComplexMatrix{{0.5}, {0.5}}) < 1e-15);
  CHECK_THROWS_AS(right_pinv(ComplexMatrix(3, 2)), DimensionError);
}

TEST_CASE("right_pinv Moore-Penrose conditions on random full-row-rank matrices") {
  RandomStream rng(21);
  for (int i = 0; i < 60; ++i) {
    const std::size_t k = 1 + rng.index(16);
    const std::size_t m = k + rng.index(129 - k);
    const ComplexMatrix a = random_matrix(rng, k, m);
    check_moore_penrose(a, right_pinv(a), 1e-10);
  }
}

TEST_CASE("right_pinv falls back to SVD on ill-conditioned input and detects rank loss") {
  ComplexMatrix a{{1.0, 0.0, 0.0}, {1.0, 1e-6, 0.0}};
  check_moore_penrose(a, right_pinv(a), 1e-8);
  CHECK(max_abs_diff(right_pinv(a), svd_right_pinv(a)) < 1e-6);

  ComplexMatrix rank1{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}};
  try {
    right_pinv(rank1);
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.effective_rank() == 1);
  }
}

TEST_CASE("matrix helpers") {
  const ComplexMatrix m{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  CHECK(m.transpose().rows() == 3);
  CHECK(m.transpose()(2, 1) == 6.0);
  CHECK(ComplexMatrix{{1i}}.adjoint()(0, 0) == -1i);
  CHECK(m.col_range(1, 2) == ComplexMatrix{{2.0, 3.0}, {5.0, 6.0}});
  CHECK(m.row_range(1, 1) == ComplexMatrix{{4.0, 5.0, 6.0}});
  CHECK(hstack(m, m).cols() == 6);
  CHECK(vstack(m, m).rows() == 4);
  CHECK(m.frobenius_norm2() == doctest::Approx(91.0));
  CHECK_THROWS_AS(m.col_range(2, 2), DimensionError);
  CHECK_THROWS_AS(hstack(m, ComplexMatrix(1, 1)), DimensionError);
  CHECK(hermitian_condition(ComplexMatrix{{4.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(4.0));
}
