#include <doctest.h>

#include "dct_sums.hpp"
#include "fixtures.hpp"
#include "schurmark/dct.hpp"

using namespace schurmark;
using fixtures::random_matrix;

TEST_CASE("the basis is orthonormal") {
  for (const Index n : {1, 2, 8, 17, 64}) {
    const DctPlan<double> plan(n);
    CHECK((plan.basis() * plan.basis().transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("constant 8x8 image keeps only the DC coefficient") {
  const DctPlan<double> plan(8);
  const double c = 37.0;
  const Matrix d = dct2(Matrix::Constant(8, 8, c), plan);
  CHECK(d(0, 0) == doctest::Approx(8 * c).epsilon(1e-14));
  Matrix rest = d;
  rest(0, 0) = 0;
  CHECK(rest.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zero in, zero out") {
  const DctPlan<double> plan(8);
  CHECK(dct2(Matrix::Zero(8, 8), plan).isZero(0));
  CHECK(idct2(Matrix::Zero(8, 8), plan).isZero(0));
}

TEST_CASE("a lone DC coefficient inverts to a constant image") {
  const DctPlan<double> plan(8);
  Matrix d = Matrix::Zero(8, 8);
  d(0, 0) = 8 * 12.5;
  CHECK((idct2(d, plan).array() - 12.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("agreement with the literal double sums for n <= 16") {
  Rng rng(21);
  for (const Index n : {1, 2, 3, 8, 16}) {
    const DctPlan<double> plan(n);
    const Matrix img = 255.0 * random_matrix(rng, n, n);
    const Matrix coeffs = 100.0 * random_matrix(rng, n, n);
    CAPTURE(n);
    CHECK((dct2(img, plan) - oracle::dct2_sum(img)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((idct2(coeffs, plan) - oracle::idct2_sum(coeffs)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("size mismatch with the plan") {
  const DctPlan<double> plan(8);
  CHECK_THROWS_AS(dct2(Matrix::Zero(4, 4), plan), DimensionError);
  CHECK_THROWS_AS(idct2(Matrix::Zero(8, 4), plan), DimensionError);
  CHECK_THROWS_AS(DctPlan<double>(0), DimensionError);
}

TEST_CASE("property: roundtrip, energy and linearity") {
  Rng rng(512);
  for (const Index n : {4, 8, 16, 64, 512}) {
    const DctPlan<double> plan(n);
    const Matrix x = 127.5 * (random_matrix(rng, n, n).array() + 1.0).matrix();
    const Matrix y = 127.5 * (random_matrix(rng, n, n).array() + 1.0).matrix();
    const Matrix dx = dct2(x, plan);
    CAPTURE(n);
    CHECK((idct2(dx, plan) - x).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(dx.norm() - x.norm()) <= 1e-9 * x.norm());
    const Matrix lhs = dct2(Matrix(0.75 * x - 2.0 * y), plan);
    const Matrix rhs = 0.75 * dx - 2.0 * dct2(y, plan);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
