#include <doctest.h>

#include "charpoly.hpp"
#include "fixtures.hpp"
#include "schurmark/hessenberg.hpp"
#include "schurmark/schur.hpp"

using namespace schurmark;
using fixtures::is_quasi_triangular;
using fixtures::random_matrix;

namespace {

double orthogonality_error(const Matrix& u) {
  return (u.transpose() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("hessenberg leaves upper-Hessenberg input untouched") {
  Matrix a(3, 3);
  a << 1, 2, 3, 4, 5, 6, 0, 7, 8;
  const auto [q, h] = hessenberg(a);
  CHECK(q == Matrix::Identity(3, 3));
  CHECK(h == a);
}

TEST_CASE("hessenberg of a diagonal matrix is the identity pair") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 5;
  a(1, 1) = 2;
  const auto [q, h] = hessenberg(a);
  CHECK(q == Matrix::Identity(2, 2));
  CHECK(h == a);
}

TEST_CASE("hessenberg of a random 8x8 matrix reconstructs and is zero below the subdiagonal") {
  Rng rng(7);
  const Matrix a = random_matrix(rng, 8, 8);
  const auto [q, h] = hessenberg(a);
  for (Index c = 0; c < 8; ++c) {
    for (Index r = c + 2; r < 8; ++r) CHECK(h(r, c) == 0.0);
  }
  CHECK(orthogonality_error(q) <= 1e-12);
  CHECK((q * h * q.transpose() - a).norm() <= 1e-10 * (1 + a.norm()));
}

TEST_CASE("hessenberg rejects non-square input") {
  CHECK_THROWS_AS(hessenberg(Matrix::Zero(3, 4)), DimensionError);
}

TEST_CASE("schur of diag(3, 1)") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3;
  a(1, 1) = 1;
  const auto f = schur_decompose(a);
  CHECK(f.t == a);
  CHECK(f.u == Matrix::Identity(2, 2));
}

TEST_CASE("schur of a standardized rotation block returns it unchanged") {
  Matrix a(2, 2);
  a << 0, 1, -1, 0;
  const auto f = schur_decompose(a);
  CHECK(f.t == a);
  CHECK(f.u == Matrix::Identity(2, 2));
}

TEST_CASE("schur of [[2,1],[1,2]] has eigenvalues 3 and 1 on the diagonal") {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto f = schur_decompose(a);
  CHECK(f.t(1, 0) == 0.0);
  const double hi = std::max(f.t(0, 0), f.t(1, 1));
  const double lo = std::min(f.t(0, 0), f.t(1, 1));
  CHECK(hi == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("schur of a random 16x16 matrix reconstructs") {
  Rng rng(16);
  const Matrix a = random_matrix(rng, 16, 16);
  const auto f = schur_decompose(a);
  CHECK((schur_reconstruct(f) - a).norm() <= 1e-9 * a.norm());
  CHECK(is_quasi_triangular(f.t));
}

TEST_CASE("schur of a 1x1 matrix") {
  Matrix a(1, 1);
  a(0, 0) = -4.5;
  const auto f = schur_decompose(a);
  CHECK(f.t(0, 0) == -4.5);
  CHECK(f.u(0, 0) == 1.0);
}

TEST_CASE("schur errors") {
  CHECK_THROWS_AS(schur_decompose(Matrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(schur_decompose(Matrix(0, 0)), DimensionError);
  Matrix bad = Matrix::Identity(3, 3);
  bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(schur_decompose(bad), ParameterError);
}

TEST_CASE("schur reports the stuck subdiagonal when the sweep budget runs out") {
  Rng rng(3);
  const Matrix a = random_matrix(rng, 12, 12);
  SchurOptions<double> starved;
  starved.sweeps_per_row = 0;
  try {
    schur_decompose(a, starved);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.subdiagonal_index() >= 1);
    CHECK(e.subdiagonal_index() < 12);
  }
}

TEST_CASE("schur_reconstruct") {
  SUBCASE("identity u returns t") {
    Rng rng(1);
    const Matrix t = random_matrix(rng, 5, 5).triangularView<Eigen::Upper>();
    CHECK(schur_reconstruct(SchurFactors<double>{Matrix::Identity(5, 5), t}) == t);
  }
  SUBCASE("90 degree rotation applied to diag(1, 0)") {
    Matrix u(2, 2);
    u << 0, -1, 1, 0;
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = 1;
    Matrix expected = Matrix::Zero(2, 2);
    expected(1, 1) = 1;
    CHECK(schur_reconstruct(SchurFactors<double>{u, t}) == expected);
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(schur_reconstruct(SchurFactors<double>{Matrix::Identity(3, 3), Matrix::Zero(2, 2)}),
                    DimensionError);
  }
}

TEST_CASE("dense helpers") {
  Rng rng(11);
  const Matrix a = random_matrix(rng, 4, 3);
  CHECK(matmul(Matrix::Identity(4, 4), a) == a);
  CHECK(transpose(transpose(a)) == a);
  CHECK(frobenius_norm(Matrix::Zero(3, 3)) == 0.0);
  CHECK(max_abs_diff(add(a, scale(a, -1.0)), Matrix::Zero(4, 3)) == 0.0);
  CHECK_THROWS_AS(matmul(a, a), DimensionError);
  CHECK_THROWS_AS(add(a, Matrix::Zero(3, 4)), DimensionError);
  CHECK_THROWS_AS(max_abs_diff(a, Matrix::Zero(4, 4)), DimensionError);
}

TEST_CASE("property: reconstruction, orthogonality and structure for random matrices up to 64") {
  Rng rng(2024);
  for (const Index n : {2, 3, 5, 8, 13, 21, 32, 64}) {
    for (int rep = 0; rep < 4; ++rep) {
      const Matrix a = random_matrix(rng, n, n);
      const auto f = schur_decompose(a);
      CAPTURE(n);
      CHECK((schur_reconstruct(f) - a).norm() <= 1e-9 * (1 + a.norm()));
      CHECK(orthogonality_error(f.u) <= 1e-10);
      CHECK(is_quasi_triangular(f.t));
    }
  }
}

TEST_CASE("property: eigenvalues agree with the characteristic polynomial for n <= 6") {
  Rng rng(99);
  for (Index n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix a = random_matrix(rng, n, n);
      const auto f = schur_decompose(a);
      CAPTURE(n);
      CHECK(fixtures::multiset_distance(fixtures::quasi_triangular_eigenvalues(f.t), oracle::eigenvalues(a)) <=
            1e-6);
    }
  }
}

TEST_CASE("property: symmetric input gives a diagonal t") {
  Rng rng(5);
  for (const Index n : {4, 10, 30}) {
    const Matrix b = random_matrix(rng, n, n);
    const Matrix a = b + b.transpose();
    const auto f = schur_decompose(a);
    Matrix off = f.t;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("property: decomposition is deterministic") {
  Rng rng(8);
  const Matrix a = random_matrix(rng, 20, 20);
  const auto f1 = schur_decompose(a);
  const auto f2 = schur_decompose(a);
  CHECK(f1.u == f2.u);
  CHECK(f1.t == f2.t);
}

TEST_CASE("complex eigenvalue blocks are standardized with equal diagonals") {
  Matrix a(3, 3);
  a << 1, -2, 0.5, 3, 1, 0, 0.25, 0, 2;
  const auto f = schur_decompose(a);
  CHECK(is_quasi_triangular(f.t));
  bool found_block = false;
  for (Index i = 0; i + 1 < 3; ++i) {
    if (f.t(i + 1, i) != 0.0) {
      found_block = true;
      CHECK(f.t(i, i) == doctest::Approx(f.t(i + 1, i + 1)).epsilon(1e-12));
      CHECK(f.t(i, i + 1) * f.t(i + 1, i) < 0.0);
    }
  }
  CHECK(found_block);
}

TEST_CASE("float scalar instantiation") {
  Eigen::MatrixXf a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  SchurOptions<float> opts;
  opts.deflation_tolerance = 1e-6f;
  const auto f = schur_decompose(a, opts);
  CHECK((f.u * f.t * f.u.transpose() - a).norm() <= 1e-4f);
}
