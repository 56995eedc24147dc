#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "schurmark/errors.hpp"

namespace schurmark {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense matrix of doubles; carries images in float form, DCT coefficients
/// and Schur factors.
using Matrix = MatrixX<double>;

namespace detail {

inline std::string shape(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace detail

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         detail::shape(a.rows(), a.cols()));
  }
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         detail::shape(a.rows(), a.cols()) + " vs " +
                         detail::shape(b.rows(), b.cols()));
  }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw ParameterError(std::string(what) + ": matrix has non-finite entries");
  }
}

// Checked dense helpers. Eigen expressions work directly on these types;
// these wrappers add the dimension checks and return plain matrices.

template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> matmul(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ " + detail::shape(a.rows(), a.cols()) +
                         " * " + detail::shape(b.rows(), b.cols()));
  }
  MatrixX<typename DerivedA::Scalar> out(a.rows(), b.cols());
  out.noalias() = a * b;
  return out;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> transpose(const Eigen::MatrixBase<Derived>& a) {
  return a.transpose();
}

template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> add(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> scale(const Eigen::MatrixBase<Derived>& a,
                                        typename Derived::Scalar factor) {
  return a * factor;
}

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar max_abs_diff(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  require_same_shape(a, b, "max_abs_diff");
  if (a.size() == 0) return 0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace schurmark
