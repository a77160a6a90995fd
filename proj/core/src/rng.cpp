#include "mfdp/rng.hpp"

#include <cmath>

namespace mfdp::rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo,
                      std::uint64_t salt) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (hi + 0xA0761D6478BD642FULL));
    h = splitmix64(h ^ (lo + 0xE7037ED1A0B428DBULL));
    h = splitmix64(h ^ (salt + 0x8EBC6AF09C88C6E3ULL));
    return h;
}

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo,
                     std::uint64_t salt) {
    const std::uint64_t h = mix_key(seed, hi, lo, salt);
    // 53 high bits -> [0,1), flipped to (0,1] so log() below is safe.
    return 1.0 - static_cast<double>(h >> 11) * 0x1.0p-53;
}

double keyed_gaussian(std::uint64_t seed, std::uint64_t row, std::uint64_t col) {
    const double u1 = keyed_uniform(seed, row, col, 1);
    const double u2 = keyed_uniform(seed, row, col, 2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::complex<double> keyed_complex_gaussian(std::uint64_t seed, std::uint64_t index) {
    const double u1 = keyed_uniform(seed, index, 0, 3);
    const double u2 = keyed_uniform(seed, index, 0, 4);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace mfdp::rng
