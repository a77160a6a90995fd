#pragma once

// Internal FFT helpers shared by matcore (Toeplitz solves) and fftmech.
// Conventions: dft/idft are the unnormalized transforms; unitary_* carry the
// 1/sqrt(N) factor so F is unitary.

#include <unsupported/Eigen/FFT>

#include "mfdp/matrix.hpp"

namespace mfdp::detail {

inline ComplexVector dft(const ComplexVector& x) {
    Eigen::FFT<double> fft;
    ComplexVector out(x.size());
    fft.fwd(out, x);
    return out;
}

inline ComplexVector idft(const ComplexVector& x) {
    // Eigen's inv() includes the 1/N factor; undo it to get the plain
    // conjugate-sum transform.
    Eigen::FFT<double> fft;
    ComplexVector out(x.size());
    fft.inv(out, x);
    return out * static_cast<double>(x.size());
}

inline ComplexVector unitary_dft(const ComplexVector& x) {
    return dft(x) / std::sqrt(static_cast<double>(x.size()));
}

inline ComplexVector unitary_idft(const ComplexVector& x) {
    return idft(x) / std::sqrt(static_cast<double>(x.size()));
}

/// Multiplies a circulant matrix (given by the DFT of its first column) into
/// a real vector: y = IDFT(eigs .* DFT(x)) / N, returned with its imaginary
/// part dropped.
inline Vector circulant_mul(const ComplexVector& eigs, const Vector& x) {
    const auto n = x.size();
    ComplexVector xc = x.cast<std::complex<double>>();
    ComplexVector prod = dft(xc).cwiseProduct(eigs);
    return (idft(prod) / static_cast<double>(n)).real();
}

}  // namespace mfdp::detail
