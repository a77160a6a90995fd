#pragma once

#include <string>

#include "mfdp/matrix.hpp"

namespace mfdp::io {

/// MAT64: one ASCII header line "MFDP1 <rows> <cols>\n" followed by
/// rows*cols little-endian IEEE-754 doubles in row-major order.
void write_mat64(const std::string& path, const Matrix& m);
Matrix read_mat64(const std::string& path);

/// CSV export of a matrix (one row per line, max_digits10 precision).
void write_csv(const std::string& path, const Matrix& m);

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double x);

}  // namespace mfdp::io
