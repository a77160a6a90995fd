#pragma once

#include "mfdp/matrix.hpp"

namespace mfdp {

/// Symmetric PSD square root: returns symmetric S with S*S = m.
///
/// Eigenvalues in [-tol, 0] are clamped to zero (dual iterations produce tiny
/// negative eigenvalues from roundoff); anything below -tol relative to the
/// spectral scale raises NotPsdError. Non-symmetric input raises
/// ContractViolation.
Matrix psd_sqrt(const Matrix& m);

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// max(rows, cols) * sigma_max * 1e-12 are treated as zero.
Matrix pinv(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Solves the square Toeplitz system T x = rhs, where T is defined by its
/// first column and first row (first_col[0] must equal first_row[0]).
///
/// Symmetric systems go through preconditioned CG with a Strang circulant
/// preconditioner (FFT matvecs); nonsymmetric systems through CG on the
/// normal equations. A dense LU fallback covers hard cases. Raises
/// SolverFailure if the relative residual cannot be brought under 1e-8.
Vector toeplitz_solve(const Vector& first_col, const Vector& first_row,
                      const Vector& rhs);

/// Dense Toeplitz matrix from first column / first row (test & fallback aid).
Matrix toeplitz_dense(const Vector& first_col, const Vector& first_row);

}  // namespace mfdp
