#pragma once

#include <cstdint>

#include "mfdp/matrix.hpp"
#include "mfdp/participation.hpp"

namespace mfdp {

/// The 2n x 2n circulant embedding of the prefix-sum matrix is generated by
/// v = [1,...,1, 0,...,0] (n ones, n zeros); its DFT eigenvalues are
/// sigma[0] = n, sigma[k] = 0 for even k > 0, and 2 / (1 - e^{-i pi k / n})
/// for odd k (|sigma[k]| = 1 / sin(pi k / 2n)).
ComplexVector dft_eigs(int n);

/// l1 norm of the DFT eigenvalue vector, from the closed forms.
double vdft_l1(int n);

/// DP prefix-sum release via the circulant mechanism: returns the prefix
/// sums of x plus the real part of the first n coordinates of
/// sqrt(kappa^2 ||v_dft||_1 / (4 n rho)) * F* Sigma^{1/2} w,
/// where w has independent real and imaginary parts, each N(0,1). With that
/// convention the release is exactly rho-zCDP under single participation.
Vector fft_prefix_release(const Vector& x, double rho, double kappa,
                          std::uint64_t seed);

/// Closed-form expected squared noise energy per released coordinate
/// (real and imaginary components): kappa^2 ||v_dft||_1^2 / (2 rho n^2).
double mse_analytic(int n, double rho, double kappa);

/// Lower bound on the expected MSE of any factorization mechanism:
/// (1 / (2 rho pi^2)) (2 + ln((2n+1)/3) + ln(2n+1)/(2n))^2.
double mse_lower_bound(int n, double rho);

/// Real 2n x n encoder C_F = F* sqrt(Sigma) F E. The principal branch of the
/// complex square root keeps the underlying circulant real; the residual
/// imaginary part must stay below 1e-10 or SolverFailure is raised.
Matrix real_fft_encoder(int n);

/// Decoder rows of the plain circulant mechanism restricted to real outputs:
/// first n rows of F* sqrt(Sigma) F (an n x 2n real matrix).
Matrix real_fft_decoder(int n);

/// Optimal-decoder fast path: computes S pinv(C_F) input in O(n log^2 n) via
/// FFT matvecs and a Toeplitz solve of C_F^T C_F.
Vector fft_optimal_decode(const Vector& input, int n);

/// First column of the symmetric PD Toeplitz Gram T = C_F^T C_F.
Vector fft_gram_first_col(int n);

/// Sensitivity of C_F under a schema; brute force when b*2^(k-1) is small,
/// the spectral upper bound otherwise. Both paths work off the Toeplitz Gram
/// so the 2n x n encoder is never materialized.
SensCertificate fft_multi_epoch_sens(int n, const ParticipationSchema& schema);

/// ||B_F[0:n,:]||_F^2 = ||v_dft||_1 / 2, the squared Frobenius norm of the
/// plain decoder (per-row noise variance is uniform for a circulant).
double fft_decoder_sq_fro(int n);

}  // namespace mfdp
