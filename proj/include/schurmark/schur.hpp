#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "schurmark/hessenberg.hpp"
#include "schurmark/matrix.hpp"

namespace schurmark {

/// Real Schur factors: a = u * t * u^T with u orthogonal and t
/// quasi-upper-triangular (1x1 blocks for real eigenvalues, standardized 2x2
/// blocks for complex-conjugate pairs).
template <typename Scalar>
struct SchurFactors {
  MatrixX<Scalar> u;
  MatrixX<Scalar> t;
};

template <typename Scalar>
struct SchurOptions {
  /// A subdiagonal entry deflates once it drops below
  /// tolerance * (|t(i-1,i-1)| + |t(i,i)|).
  Scalar deflation_tolerance = Scalar(1e-12);
  /// Total QR sweeps allowed per unit of dimension.
  Index sweeps_per_row = 100;
};

namespace detail {

template <typename Scalar>
Scalar sign_of(Scalar magnitude, Scalar sign_source) {
  return sign_source >= Scalar(0) ? std::abs(magnitude) : -std::abs(magnitude);
}

/// Working state of the QR iteration: t is reduced in place while every
/// similarity transform is accumulated into u.
template <typename Scalar>
class QrIteration {
 public:
  QrIteration(MatrixX<Scalar>& t, MatrixX<Scalar>& u, const SchurOptions<Scalar>& options)
      : t_(t), u_(u), n_(t.rows()), options_(options) {
    norm_ = t_.template lpNorm<1>();
  }

  void run() {
    Index iu = n_ - 1;
    Index stagnant = 0;
    Index sweeps = 0;
    const Index budget = options_.sweeps_per_row * n_;

    while (iu >= 0) {
      const Index il = active_start(iu);
      if (il == iu) {
        --iu;
        stagnant = 0;
      } else if (il == iu - 1) {
        standardize_block(il);
        iu -= 2;
        stagnant = 0;
      } else {
        if (sweeps >= budget) {
          throw ConvergenceError("schur_decompose: QR iteration did not converge within " +
                                     std::to_string(budget) + " sweeps (subdiagonal " +
                                     std::to_string(iu) + " stuck)",
                                 iu);
        }
        ++sweeps;
        ++stagnant;
        francis_sweep(il, iu, stagnant);
      }
    }
  }

 private:
  // Scans upward from iu for a negligible subdiagonal entry; zeroes it and
  // returns the first row of the unreduced trailing block.
  Index active_start(Index iu) {
    for (Index k = iu; k > 0; --k) {
      Scalar s = std::abs(t_(k - 1, k - 1)) + std::abs(t_(k, k));
      if (s == Scalar(0)) s = norm_;
      if (std::abs(t_(k, k - 1)) <= options_.deflation_tolerance * s) {
        t_(k, k - 1) = Scalar(0);
        return k;
      }
    }
    return 0;
  }

  // Householder reflector I - tau * [1 v1 v2]^T [1 v1 v2] sending (x, y, z)
  // to a multiple of e1. tau = 0 means identity.
  struct Reflector {
    Scalar tau = 0;
    Scalar v1 = 0;
    Scalar v2 = 0;
    Scalar beta = 0;
  };

  static Reflector make_reflector(Scalar x, Scalar y, Scalar z) {
    Reflector r;
    const Scalar tail = y * y + z * z;
    if (tail == Scalar(0)) {
      r.beta = x;
      return r;
    }
    const Scalar norm = std::sqrt(x * x + tail);
    r.beta = x >= Scalar(0) ? -norm : norm;
    r.tau = (r.beta - x) / r.beta;
    r.v1 = y / (x - r.beta);
    r.v2 = z / (x - r.beta);
    return r;
  }

  // Applies the reflector on rows k..k+width-1 (left) for columns [c0, n),
  // on columns k.. (right) for rows [0, r1], and to u.
  void apply_reflector(const Reflector& r, Index k, Index width, Index c0, Index r1) {
    if (r.tau == Scalar(0)) return;
    const Scalar tau = r.tau;
    const Scalar v1 = r.v1;
    const Scalar v2 = r.v2;
    if (width == 3) {
      for (Index j = c0; j < n_; ++j) {
        const Scalar s = t_(k, j) + v1 * t_(k + 1, j) + v2 * t_(k + 2, j);
        t_(k, j) -= tau * s;
        t_(k + 1, j) -= tau * s * v1;
        t_(k + 2, j) -= tau * s * v2;
      }
      apply_right3(t_, k, r1 + 1, tau, v1, v2);
      apply_right3(u_, k, n_, tau, v1, v2);
    } else {
      for (Index j = c0; j < n_; ++j) {
        const Scalar s = t_(k, j) + v1 * t_(k + 1, j);
        t_(k, j) -= tau * s;
        t_(k + 1, j) -= tau * s * v1;
      }
      apply_right2(t_, k, r1 + 1, tau, v1);
      apply_right2(u_, k, n_, tau, v1);
    }
  }

  static void apply_right3(MatrixX<Scalar>& m, Index k, Index rows, Scalar tau, Scalar v1,
                           Scalar v2) {
    Scalar* c0 = m.col(k).data();
    Scalar* c1 = m.col(k + 1).data();
    Scalar* c2 = m.col(k + 2).data();
    for (Index i = 0; i < rows; ++i) {
      const Scalar s = tau * (c0[i] + v1 * c1[i] + v2 * c2[i]);
      c0[i] -= s;
      c1[i] -= s * v1;
      c2[i] -= s * v2;
    }
  }

  static void apply_right2(MatrixX<Scalar>& m, Index k, Index rows, Scalar tau, Scalar v1) {
    Scalar* c0 = m.col(k).data();
    Scalar* c1 = m.col(k + 1).data();
    for (Index i = 0; i < rows; ++i) {
      const Scalar s = tau * (c0[i] + v1 * c1[i]);
      c0[i] -= s;
      c1[i] -= s * v1;
    }
  }

  // One implicit double-shift (Francis) sweep over the unreduced block il..iu.
  void francis_sweep(Index il, Index iu, Index stagnant) {
    Scalar shift_sum;
    Scalar shift_prod;
    if (stagnant % 10 == 0) {
      // Exceptional shift to break cycles.
      const Scalar s = std::abs(t_(iu, iu - 1)) + std::abs(t_(iu - 1, iu - 2));
      const Scalar h11 = Scalar(0.75) * s + t_(iu, iu);
      const Scalar h12 = Scalar(-0.4375) * s;
      shift_sum = Scalar(2) * h11;
      shift_prod = h11 * h11 - h12 * s;
    } else {
      const Scalar a = t_(iu - 1, iu - 1);
      const Scalar b = t_(iu - 1, iu);
      const Scalar c = t_(iu, iu - 1);
      const Scalar d = t_(iu, iu);
      shift_sum = a + d;
      shift_prod = a * d - b * c;
    }

    const Scalar h00 = t_(il, il);
    const Scalar h01 = t_(il, il + 1);
    const Scalar h10 = t_(il + 1, il);
    const Scalar h11 = t_(il + 1, il + 1);
    const Scalar h21 = t_(il + 2, il + 1);
    Scalar x = h00 * h00 + h01 * h10 - shift_sum * h00 + shift_prod;
    Scalar y = h10 * (h00 + h11 - shift_sum);
    Scalar z = h10 * h21;

    for (Index k = il; k + 2 <= iu; ++k) {
      const Scalar scale = std::abs(x) + std::abs(y) + std::abs(z);
      if (scale != Scalar(0)) {
        x /= scale;
        y /= scale;
        z /= scale;
      }
      const Reflector r = make_reflector(x, y, z);
      apply_reflector(r, k, 3, k > il ? k - 1 : il, std::min(k + 3, iu));
      if (k > il) {
        t_(k + 1, k - 1) = Scalar(0);
        t_(k + 2, k - 1) = Scalar(0);
      }
      x = t_(k + 1, k);
      y = t_(k + 2, k);
      if (k + 3 <= iu) z = t_(k + 3, k);
    }

    const Index k = iu - 1;
    const Reflector r = make_reflector(x, y, Scalar(0));
    apply_reflector(r, k, 2, k - 1, iu);
    t_(iu, iu - 2) = Scalar(0);
  }

  // Brings the 2x2 block at (p, p) into standard form (LAPACK dlanv2): split
  // into a triangle when its eigenvalues are real, equal diagonal entries and
  // opposite-signed off-diagonals when they are complex.
  void standardize_block(Index p) {
    Scalar a = t_(p, p);
    Scalar b = t_(p, p + 1);
    Scalar c = t_(p + 1, p);
    Scalar d = t_(p + 1, p + 1);
    Scalar cs = 1;
    Scalar sn = 0;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    if (c == Scalar(0)) {
      // already triangular
    } else if (b == Scalar(0)) {
      cs = 0;
      sn = 1;
      std::swap(a, d);
      b = -c;
      c = 0;
    } else if (a - d == Scalar(0) && (b >= Scalar(0)) != (c >= Scalar(0))) {
      // already standard
    } else {
      const Scalar temp = a - d;
      Scalar p_half = Scalar(0.5) * temp;
      const Scalar bcmax = std::max(std::abs(b), std::abs(c));
      const Scalar bcmis =
          std::min(std::abs(b), std::abs(c)) * sign_of(Scalar(1), b) * sign_of(Scalar(1), c);
      const Scalar scale = std::max(std::abs(p_half), bcmax);
      Scalar z = p_half / scale * p_half + bcmax / scale * bcmis;
      if (z >= Scalar(4) * eps) {
        // real eigenvalues
        z = p_half + sign_of(std::sqrt(scale) * std::sqrt(z), p_half);
        a = d + z;
        d = d - bcmax / z * bcmis;
        const Scalar tau = std::hypot(c, z);
        cs = z / tau;
        sn = c / tau;
        b = b - c;
        c = 0;
      } else {
        // complex or nearly equal real eigenvalues: equalize the diagonal
        const Scalar sigma = b + c;
        const Scalar tau = std::hypot(sigma, temp);
        cs = std::sqrt(Scalar(0.5) * (Scalar(1) + std::abs(sigma) / tau));
        sn = -(p_half / (tau * cs)) * sign_of(Scalar(1), sigma);

        const Scalar aa = a * cs + b * sn;
        const Scalar bb = -a * sn + b * cs;
        const Scalar cc = c * cs + d * sn;
        const Scalar dd = -c * sn + d * cs;
        a = aa * cs + cc * sn;
        b = bb * cs + dd * sn;
        c = -aa * sn + cc * cs;
        d = -bb * sn + dd * cs;

        const Scalar mid = Scalar(0.5) * (a + d);
        a = mid;
        d = mid;
        if (c != Scalar(0)) {
          if (b != Scalar(0)) {
            if ((b >= Scalar(0)) == (c >= Scalar(0))) {
              const Scalar sab = std::sqrt(std::abs(b));
              const Scalar sac = std::sqrt(std::abs(c));
              p_half = sign_of(sab * sac, c);
              const Scalar inv = Scalar(1) / std::sqrt(std::abs(b + c));
              a = mid + p_half;
              d = mid - p_half;
              b = b - c;
              c = 0;
              const Scalar cs1 = sab * inv;
              const Scalar sn1 = sac * inv;
              const Scalar rot = cs * cs1 - sn * sn1;
              sn = cs * sn1 + sn * cs1;
              cs = rot;
            }
          } else {
            b = -c;
            c = 0;
            const Scalar rot = cs;
            cs = -sn;
            sn = rot;
          }
        }
      }
    }

    t_(p, p) = a;
    t_(p, p + 1) = b;
    t_(p + 1, p) = c;
    t_(p + 1, p + 1) = d;
    if (cs == Scalar(1) && sn == Scalar(0)) return;

    // t <- R^T t R and u <- u R with R = [cs -sn; sn cs].
    for (Index j = p + 2; j < n_; ++j) {
      const Scalar x = t_(p, j);
      const Scalar y = t_(p + 1, j);
      t_(p, j) = cs * x + sn * y;
      t_(p + 1, j) = -sn * x + cs * y;
    }
    rotate_columns(t_, p, p, cs, sn);
    rotate_columns(u_, p, n_, cs, sn);
  }

  static void rotate_columns(MatrixX<Scalar>& m, Index p, Index rows, Scalar cs, Scalar sn) {
    Scalar* c0 = m.col(p).data();
    Scalar* c1 = m.col(p + 1).data();
    for (Index i = 0; i < rows; ++i) {
      const Scalar x = c0[i];
      const Scalar y = c1[i];
      c0[i] = cs * x + sn * y;
      c1[i] = -sn * x + cs * y;
    }
  }

  MatrixX<Scalar>& t_;
  MatrixX<Scalar>& u_;
  Index n_;
  SchurOptions<Scalar> options_;
  Scalar norm_ = 0;
};

}  // namespace detail

/// Real Schur decomposition a = u * t * u^T via Householder reduction to
/// Hessenberg form followed by Francis double-shift QR iteration.
///
/// No ordering is imposed on the eigenvalues along t's diagonal. Throws
/// DimensionError for non-square input and ConvergenceError when the sweep
/// budget (options.sweeps_per_row * n) is exhausted.
template <typename Derived>
SchurFactors<typename Derived::Scalar> schur_decompose(
    const Eigen::MatrixBase<Derived>& a,
    const SchurOptions<typename Derived::Scalar>& options = {}) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "schur_decompose");
  require_finite(a, "schur_decompose");

  auto [q, h] = hessenberg(a);
  SchurFactors<Scalar> f{std::move(q), std::move(h)};
  detail::QrIteration<Scalar>(f.t, f.u, options).run();

  const Index n = f.t.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 2; i < n; ++i) f.t(i, j) = Scalar(0);
  }
  return f;
}

/// u * t * u^T.
template <typename Scalar>
MatrixX<Scalar> schur_reconstruct(const SchurFactors<Scalar>& f) {
  if (f.u.rows() != f.u.cols() || f.t.rows() != f.t.cols() || f.u.rows() != f.t.rows()) {
    throw DimensionError("schur_reconstruct: u is " + detail::shape(f.u.rows(), f.u.cols()) +
                         " but t is " + detail::shape(f.t.rows(), f.t.cols()));
  }
  MatrixX<Scalar> ut(f.u.rows(), f.u.cols());
  ut.noalias() = f.u * f.t;
  MatrixX<Scalar> out(f.u.rows(), f.u.rows());
  out.noalias() = ut * f.u.transpose();
  return out;
}

}  // namespace schurmark
