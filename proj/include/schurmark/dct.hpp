#pragma once

#include <cmath>
#include <numbers>

#include "schurmark/matrix.hpp"

namespace schurmark {

/// Orthonormal type-II DCT basis for n x n images:
///   basis(i, x) = sqrt(2/n) * C(i) * cos((2x + 1) i pi / 2n),  C(0) = 1/sqrt(2), else 1.
/// With that scaling dct2 = B * img * B^T and idct2 = B^T * coeffs * B.
template <typename Scalar>
class DctPlan {
 public:
  explicit DctPlan(Index n) : basis_(n, n) {
    if (n <= 0) throw DimensionError("DctPlan: side length must be positive");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar gain = std::sqrt(Scalar(2) / Scalar(n));
    for (Index i = 0; i < n; ++i) {
      const Scalar c = i == 0 ? Scalar(1) / std::sqrt(Scalar(2)) : Scalar(1);
      for (Index x = 0; x < n; ++x) {
        basis_(i, x) = gain * c * std::cos(Scalar(2 * x + 1) * Scalar(i) * pi / Scalar(2 * n));
      }
    }
  }

  Index size() const noexcept { return basis_.rows(); }
  const MatrixX<Scalar>& basis() const noexcept { return basis_; }

 private:
  MatrixX<Scalar> basis_;
};

namespace detail {

template <typename Derived, typename Scalar>
void require_plan_fit(const Eigen::MatrixBase<Derived>& m, const DctPlan<Scalar>& plan,
                      const char* what) {
  if (m.rows() != plan.size() || m.cols() != plan.size()) {
    throw DimensionError(std::string(what) + ": expected " + shape(plan.size(), plan.size()) +
                         ", got " + shape(m.rows(), m.cols()));
  }
}

}  // namespace detail

template <typename Derived, typename Scalar = typename Derived::Scalar>
MatrixX<Scalar> dct2(const Eigen::MatrixBase<Derived>& img, const DctPlan<Scalar>& plan) {
  detail::require_plan_fit(img, plan, "dct2");
  MatrixX<Scalar> tmp(plan.size(), plan.size());
  tmp.noalias() = plan.basis() * img;
  MatrixX<Scalar> out(plan.size(), plan.size());
  out.noalias() = tmp * plan.basis().transpose();
  return out;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
MatrixX<Scalar> idct2(const Eigen::MatrixBase<Derived>& coeffs, const DctPlan<Scalar>& plan) {
  detail::require_plan_fit(coeffs, plan, "idct2");
  MatrixX<Scalar> tmp(plan.size(), plan.size());
  tmp.noalias() = plan.basis().transpose() * coeffs;
  MatrixX<Scalar> out(plan.size(), plan.size());
  out.noalias() = tmp * plan.basis();
  return out;
}

}  // namespace schurmark
