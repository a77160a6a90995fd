#pragma once

#include <complex>
#include <cstdint>

namespace mfdp::rng {

/// SplitMix64 finalizer; full-period mixing of a 64-bit state.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in (0, 1], keyed by (seed, hi, lo, salt).
///
/// Counter-based: the value depends only on the key, never on call order,
/// so per-coordinate noise can be generated independently and in parallel.
double keyed_uniform(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo,
                     std::uint64_t salt = 0);

/// Standard normal deviate keyed by (seed, row, col). Box-Muller over two
/// keyed uniforms; bit-reproducible for a fixed libm.
double keyed_gaussian(std::uint64_t seed, std::uint64_t row, std::uint64_t col);

/// Complex deviate with independent real and imaginary parts, each N(0, 1).
std::complex<double> keyed_complex_gaussian(std::uint64_t seed, std::uint64_t index);

}  // namespace mfdp::rng
