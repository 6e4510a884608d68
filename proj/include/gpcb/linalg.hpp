#pragma once

#include <Eigen/Cholesky>

#include "gpcb/errors.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

/// Relative diagonal jitter added per retry when a factorization fails.
inline constexpr Scalar kCholeskyJitter = 1e-8;
inline constexpr int kCholeskyRetries = 3;

/// Lower-triangular Cholesky factor of a symmetric PSD matrix. On failure
/// adds 1e-8 * trace/N to the diagonal and retries up to three times before
/// raising NumericalError.
inline Matrix cholesky_with_jitter(const Matrix& a) {
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  const Scalar unit = kCholeskyJitter * a.trace() / static_cast<Scalar>(n);
  for (int attempt = 0; attempt <= kCholeskyRetries; ++attempt) {
    Matrix work = a;
    if (attempt > 0) {
      work.diagonal().array() += static_cast<Scalar>(attempt) * unit;
    }
    Eigen::LLT<Matrix> llt(work);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericalError("cholesky factorization failed after jitter retries");
}

/// Given L with L L^T = A, returns the factor of [[A, B], [B^T, C]].
/// `cross` is B (old-by-new) and `corner` is C. The Schur complement goes
/// through the same jitter policy as a fresh factorization.
inline Matrix extend_cholesky(const Matrix& factor, const Matrix& cross,
                              const Matrix& corner) {
  const Index n = factor.rows();
  const Index b = corner.rows();
  if (cross.rows() != n || cross.cols() != b) {
    throw InputError("extend_cholesky: cross block has wrong shape");
  }
  if (n == 0) return cholesky_with_jitter(corner);

  Matrix y = factor.triangularView<Eigen::Lower>().solve(cross);
  Matrix schur = corner - y.transpose() * y;
  Matrix corner_factor = cholesky_with_jitter(schur);

  Matrix out = Matrix::Zero(n + b, n + b);
  out.topLeftCorner(n, n) = factor;
  out.bottomLeftCorner(b, n) = y.transpose();
  out.bottomRightCorner(b, b) = corner_factor;
  return out;
}

/// log det(A) from its Cholesky factor L.
inline Scalar log_det_from_factor(const Matrix& factor) {
  return 2.0 * factor.diagonal().array().log().sum();
}

}  // namespace gpcb
