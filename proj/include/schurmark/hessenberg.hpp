#pragma once

#include <cmath>

#include "schurmark/matrix.hpp"

namespace schurmark {

template <typename Scalar>
struct HessenbergResult {
  MatrixX<Scalar> q;  // orthogonal, a = q * h * q^T
  MatrixX<Scalar> h;  // upper Hessenberg
};

/// Householder reduction to upper Hessenberg form. Columns whose
/// below-subdiagonal part is already zero are left untouched, so a Hessenberg
/// input comes back unchanged with q = I.
template <typename Derived>
HessenbergResult<typename Derived::Scalar> hessenberg(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  require_square(a, "hessenberg");
  require_finite(a, "hessenberg");

  const Index n = a.rows();
  HessenbergResult<Scalar> out{MatrixX<Scalar>::Identity(n, n), a};
  auto& h = out.h;
  auto& q = out.q;

  Vector v;
  Vector col_tmp;
  RowVector row_tmp;
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    const Scalar tail = h.col(k).tail(m - 1).squaredNorm();
    if (tail == Scalar(0)) continue;

    // Reflector P = I - tau * v * v^T with v(0) = 1 maps h(k+1:, k) to beta * e1.
    const Scalar alpha = h(k + 1, k);
    const Scalar norm = std::sqrt(alpha * alpha + tail);
    const Scalar beta = alpha >= Scalar(0) ? -norm : norm;
    const Scalar tau = (beta - alpha) / beta;
    v = h.col(k).tail(m) / (alpha - beta);
    v(0) = Scalar(1);

    h(k + 1, k) = beta;
    h.col(k).tail(m - 1).setZero();

    auto lower = h.block(k + 1, k + 1, m, n - k - 1);
    row_tmp.noalias() = v.transpose() * lower;
    lower.noalias() -= tau * v * row_tmp;

    auto right = h.rightCols(m);
    col_tmp.noalias() = right * v;
    right.noalias() -= tau * col_tmp * v.transpose();

    auto qright = q.rightCols(m);
    col_tmp.noalias() = qright * v;
    qright.noalias() -= tau * col_tmp * v.transpose();
  }
  return out;
}

}  // namespace schurmark
