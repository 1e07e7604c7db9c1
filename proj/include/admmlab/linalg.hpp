#ifndef ADMMLAB_LINALG_HPP
#define ADMMLAB_LINALG_HPP

// Small dense linear algebra used throughout the library. Everything here is
// header-only and templated on the scalar type; matrices are at most a few
// dozen rows so clarity wins over blocking or vectorisation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "admmlab/errors.hpp"

namespace admmlab {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

template <typename Scalar>
struct EigenRange {
  Scalar min;
  Scalar max;
};

namespace linalg_detail {

inline constexpr int kJacobiMaxSweeps = 100;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!all_finite(m)) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* what) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  require_finite(m, what);
  if (m.size() == 0) return;
  const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
  const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-10) * scale) {
    std::ostringstream os;
    os << what << ": matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw ValidationError(os.str());
  }
}

// Cyclic Jacobi rotations; returns the diagonal once the off-diagonal
// Frobenius norm drops below 1e-12 relative to the full norm.
template <typename Scalar>
VectorX<Scalar> jacobi_eigenvalues(MatrixX<Scalar> a) {
  const Eigen::Index n = a.rows();
  a = (a + a.transpose()) / Scalar(2);
  const Scalar total = a.norm();
  const Scalar tol = Scalar(1e-12) * std::max<Scalar>(total, std::numeric_limits<Scalar>::min());
  auto off_norm = [&]() {
    Scalar s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm() > tol; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar tau = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  return a.diagonal();
}

}  // namespace linalg_detail

/// Smallest and largest eigenvalue of a symmetric matrix. Closed form for
/// 1x1 and 2x2, cyclic Jacobi otherwise.
template <typename Derived>
EigenRange<typename Derived::Scalar> extreme_eigenvalues_symmetric(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  linalg_detail::require_symmetric(m, "extreme_eigenvalues_symmetric");
  const Eigen::Index n = m.rows();
  if (n == 0) throw ValidationError("extreme_eigenvalues_symmetric: empty matrix");
  if (n == 1) return {m(0, 0), m(0, 0)};
  if (n == 2) {
    const Scalar a = m(0, 0);
    const Scalar d = m(1, 1);
    const Scalar b = (m(0, 1) + m(1, 0)) / Scalar(2);
    const Scalar mid = (a + d) / Scalar(2);
    const Scalar rad = std::hypot((a - d) / Scalar(2), b);
    return {mid - rad, mid + rad};
  }
  const VectorX<Scalar> ev = linalg_detail::jacobi_eigenvalues<Scalar>(m);
  return {ev.minCoeff(), ev.maxCoeff()};
}

/// sqrt of the largest eigenvalue of B^T B (computed on the smaller Gram matrix).
template <typename Derived>
typename Derived::Scalar largest_singular_value(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  linalg_detail::require_finite(b, "largest_singular_value");
  if (b.size() == 0) return Scalar(0);
  const MatrixX<Scalar> gram =
      b.rows() <= b.cols() ? MatrixX<Scalar>(b * b.transpose()) : MatrixX<Scalar>(b.transpose() * b);
  const Scalar top = extreme_eigenvalues_symmetric(gram).max;
  return std::sqrt(std::max(top, Scalar(0)));
}

/// Cholesky solve of P x = b. Throws NotSpdError on a non-positive pivot.
template <typename DerivedP, typename DerivedB>
VectorX<typename DerivedP::Scalar> solve_spd(const Eigen::MatrixBase<DerivedP>& p,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedP::Scalar;
  if (p.rows() != p.cols() || p.rows() != b.rows()) {
    std::ostringstream os;
    os << "solve_spd: shape mismatch (P " << p.rows() << "x" << p.cols() << ", b " << b.rows()
       << ")";
    throw ValidationError(os.str());
  }
  linalg_detail::require_finite(p, "solve_spd");
  linalg_detail::require_finite(b, "solve_spd");
  if (p.rows() == 0) return VectorX<Scalar>();
  const Eigen::LLT<MatrixX<Scalar>> llt(p);
  if (llt.info() != Eigen::Success) {
    throw NotSpdError("solve_spd: matrix is not positive definite (non-positive pivot)");
  }
  return llt.solve(b);
}

/// A^+ = A^T (A A^T)^{-1}; requires the smallest eigenvalue of AA^T to exceed
/// 1e-12 times the largest.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  linalg_detail::require_finite(a, "pseudo_inverse");
  if (a.rows() == 0) throw ValidationError("pseudo_inverse: matrix has no rows");
  const MatrixX<Scalar> gram = a * a.transpose();
  const auto range = extreme_eigenvalues_symmetric(gram);
  if (!(range.min > Scalar(1e-12) * range.max)) {
    std::ostringstream os;
    os << "pseudo_inverse: A A^T is singular (smallest eigenvalue " << range.min
       << ", largest " << range.max << ")";
    throw SingularityError(os.str());
  }
  const Eigen::LLT<MatrixX<Scalar>> llt(gram);
  const MatrixX<Scalar> inv = llt.solve(MatrixX<Scalar>::Identity(gram.rows(), gram.cols()));
  return a.transpose() * inv;
}

/// Throws unless G is symmetric with smallest eigenvalue >= -1e-10.
template <typename Derived>
void require_psd(const Eigen::MatrixBase<Derived>& g, const char* what) {
  using Scalar = typename Derived::Scalar;
  linalg_detail::require_symmetric(g, what);
  if (g.rows() == 0) return;
  const Scalar lo = extreme_eigenvalues_symmetric(g).min;
  if (lo < Scalar(-1e-10)) {
    std::ostringstream os;
    os << what << ": matrix is indefinite (smallest eigenvalue " << lo << ")";
    throw ValidationError(os.str());
  }
}

/// Unchecked x^T G x; callers that own G validate it once up front.
template <typename DerivedX, typename DerivedG>
typename DerivedX::Scalar quad_form(const Eigen::MatrixBase<DerivedX>& x,
                                    const Eigen::MatrixBase<DerivedG>& g) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar value = x.dot(g * x);
  return (value < Scalar(0) && value >= Scalar(-1e-12)) ? Scalar(0) : value;
}

/// x^T G x for PSD G, clamped at zero within 1e-12.
template <typename DerivedX, typename DerivedG>
typename DerivedX::Scalar weighted_norm_sq(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedG>& g) {
  if (g.rows() != x.rows() || g.cols() != x.rows()) {
    std::ostringstream os;
    os << "weighted_norm_sq: G is " << g.rows() << "x" << g.cols() << " but x has " << x.rows()
       << " entries";
    throw ValidationError(os.str());
  }
  require_psd(g, "weighted_norm_sq");
  return quad_form(x, g);
}

/// Largest eigenvalue modulus of a real 2x2 matrix.
template <typename Derived>
typename Derived::Scalar spectral_radius_2x2(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != 2 || m.cols() != 2) {
    std::ostringstream os;
    os << "spectral_radius_2x2: expected 2x2, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  linalg_detail::require_finite(m, "spectral_radius_2x2");
  const Scalar half_trace = (m(0, 0) + m(1, 1)) / Scalar(2);
  const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Scalar disc = half_trace * half_trace - det;
  if (disc >= Scalar(0)) {
    const Scalar root = std::sqrt(disc);
    return std::max(std::abs(half_trace + root), std::abs(half_trace - root));
  }
  // complex conjugate pair: |z|^2 = det
  return std::sqrt(det);
}

}  // namespace admmlab

#endif  // ADMMLAB_LINALG_HPP
