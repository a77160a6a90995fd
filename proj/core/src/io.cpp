#include "mfdp/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mfdp/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "MAT64 writer assumes a little-endian host");

namespace mfdp {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite())
        throw ContractViolation(std::string(what) + ": non-finite entries");
}

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite())
        throw ContractViolation(std::string(what) + ": non-finite entries");
}

double asymmetry(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

bool is_symmetric(const Matrix& m, double tol) {
    return m.rows() == m.cols() && asymmetry(m) <= tol;
}

}  // namespace mfdp

namespace mfdp::io {

void write_mat64(const std::string& path, const Matrix& m) {
    require_finite(m, "write_mat64");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverFailure("write_mat64: cannot open " + path);
    f << "MFDP1 " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double x = m(i, j);
            f.write(reinterpret_cast<const char*>(&x), sizeof(double));
        }
    if (!f) throw SolverFailure("write_mat64: short write to " + path);
}

Matrix read_mat64(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ContractViolation("read_mat64: cannot open " + path);
    std::string magic;
    long rows = 0, cols = 0;
    f >> magic >> rows >> cols;
    if (magic != "MFDP1" || rows <= 0 || cols <= 0)
        throw ContractViolation("read_mat64: bad header in " + path);
    f.get();  // consume '\n'
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) {
            double x;
            f.read(reinterpret_cast<char*>(&x), sizeof(double));
            if (!f) throw ContractViolation("read_mat64: truncated payload in " + path);
            m(i, j) = x;
        }
    require_finite(m, "read_mat64");
    return m;
}

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f) throw SolverFailure("write_csv: cannot open " + path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ",";
            f << format_double(m(i, j));
        }
        f << "\n";
    }
}

}  // namespace mfdp::io
