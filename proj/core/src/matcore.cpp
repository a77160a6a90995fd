#include "mfdp/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "fft_util.hpp"
#include "mfdp/errors.hpp"

namespace mfdp {

Matrix psd_sqrt(const Matrix& m) {
    require_finite(m, "psd_sqrt");
    if (!is_symmetric(m))
        throw ContractViolation("psd_sqrt: input is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    Vector lam = eig.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * scale;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -tol)
            throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lam(i)) +
                              " below -1e-10 * scale");
        if (lam(i) < 0.0) lam(i) = 0.0;
    }
    const Matrix& v = eig.eigenvectors();
    return v * lam.cwiseSqrt().asDiagonal() * v.transpose();
}

Matrix pinv(const Matrix& m) {
    require_finite(m, "pinv");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return Matrix::Zero(m.cols(), m.rows());
    const double cutoff =
        static_cast<double>(std::max(m.rows(), m.cols())) * s(0) * 1e-12;
    Vector sinv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) sinv(i) = 1.0 / s(i);
    return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_norm(const Matrix& m) {
    require_finite(m, "spectral_norm");
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Matrix toeplitz_dense(const Vector& first_col, const Vector& first_row) {
    const auto n = first_col.size();
    Matrix t(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            t(i, j) = (i >= j) ? first_col(i - j) : first_row(j - i);
    return t;
}

namespace {

// Circulant embedding of a Toeplitz matvec: length-2n generator
// [col_0..col_{n-1}, 0, row_{n-1}..row_1].
ComplexVector embedding_eigs(const Vector& col, const Vector& row) {
    const auto n = col.size();
    ComplexVector c = ComplexVector::Zero(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) c(j) = col(j);
    for (Eigen::Index j = 1; j < n; ++j) c(2 * n - j) = row(j);
    return detail::dft(c);
}

Vector toeplitz_mul(const ComplexVector& eigs, const Vector& x) {
    const auto n = x.size();
    Vector padded = Vector::Zero(2 * n);
    padded.head(n) = x;
    return detail::circulant_mul(eigs, padded).head(n);
}

// Strang circulant preconditioner eigenvalues for a symmetric Toeplitz.
// Returns an empty vector when the preconditioner is not positive definite.
Vector strang_eigs(const Vector& col) {
    const auto n = col.size();
    ComplexVector s = ComplexVector::Zero(n);
    s(0) = col(0);
    for (Eigen::Index j = 1; j < n; ++j) s(j) = (j <= n / 2) ? col(j) : col(n - j);
    ComplexVector ev = detail::dft(s);
    Vector real_ev(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(ev(i).imag()) > 1e-8 * std::max(1.0, std::abs(ev(i).real())) ||
            ev(i).real() <= 0.0)
            return Vector();
        real_ev(i) = ev(i).real();
    }
    return real_ev;
}

Vector circulant_solve_real(const Vector& eigs, const Vector& r) {
    ComplexVector rc = detail::dft(r.cast<std::complex<double>>());
    rc.array() /= eigs.array();
    return (detail::idft(rc) / static_cast<double>(r.size())).real();
}

// Preconditioned CG for symmetric Toeplitz systems.
bool pcg_symmetric(const ComplexVector& t_eigs, const Vector& precond,
                   const Vector& b, Vector& x, double tol, int max_iters) {
    const auto n = b.size();
    x = Vector::Zero(n);
    Vector r = b;
    Vector z = precond.size() ? circulant_solve_real(precond, r) : r;
    Vector p = z;
    double rz = r.dot(z);
    const double nb = b.norm();
    if (nb == 0.0) return true;
    for (int it = 0; it < max_iters; ++it) {
        Vector ap = toeplitz_mul(t_eigs, p);
        const double pap = p.dot(ap);
        if (!(pap > 0.0) || !std::isfinite(pap)) return false;
        const double alpha = rz / pap;
        x += alpha * p;
        r -= alpha * ap;
        if (r.norm() <= tol * nb) return true;
        z = precond.size() ? circulant_solve_real(precond, r) : r;
        const double rz2 = r.dot(z);
        if (!std::isfinite(rz2)) return false;
        p = z + (rz2 / rz) * p;
        rz = rz2;
    }
    return false;
}

// CG on the normal equations T^T T x = T^T b for nonsymmetric Toeplitz.
bool cgnr(const ComplexVector& t_eigs, const ComplexVector& tt_eigs,
          const Vector& b, Vector& x, double tol, int max_iters) {
    const auto n = b.size();
    x = Vector::Zero(n);
    Vector r = b;
    Vector s = toeplitz_mul(tt_eigs, r);
    Vector p = s;
    double ss = s.squaredNorm();
    const double nb = b.norm();
    if (nb == 0.0) return true;
    for (int it = 0; it < max_iters; ++it) {
        Vector q = toeplitz_mul(t_eigs, p);
        const double qq = q.squaredNorm();
        if (!(qq > 0.0) || !std::isfinite(qq)) return false;
        const double alpha = ss / qq;
        x += alpha * p;
        r -= alpha * q;
        if (r.norm() <= tol * nb) return true;
        s = toeplitz_mul(tt_eigs, r);
        const double ss2 = s.squaredNorm();
        p = s + (ss2 / ss) * p;
        ss = ss2;
    }
    return false;
}

}  // namespace

Vector toeplitz_solve(const Vector& first_col, const Vector& first_row,
                      const Vector& rhs) {
    require_finite(first_col, "toeplitz_solve: first_col");
    require_finite(first_row, "toeplitz_solve: first_row");
    require_finite(rhs, "toeplitz_solve: rhs");
    const auto n = first_col.size();
    if (first_row.size() != n || rhs.size() != n)
        throw ContractViolation("toeplitz_solve: size mismatch");
    const double scale =
        std::max({1.0, first_col.cwiseAbs().maxCoeff(), first_row.cwiseAbs().maxCoeff()});
    if (std::abs(first_col(0) - first_row(0)) > 1e-12 * scale)
        throw ContractViolation("toeplitz_solve: first_col[0] != first_row[0]");
    if (n == 1) {
        if (std::abs(first_col(0)) <= 1e-300)
            throw SolverFailure("toeplitz_solve: singular 1x1 system");
        return rhs / first_col(0);
    }

    const ComplexVector t_eigs = embedding_eigs(first_col, first_row);
    const bool symmetric = (first_col - first_row).cwiseAbs().maxCoeff() <= 1e-14 * scale;
    const double tol = 1e-11;
    const int max_iters = static_cast<int>(std::min<Eigen::Index>(4 * n + 200, 20000));

    Vector x;
    bool ok = false;
    if (symmetric) {
        ok = pcg_symmetric(t_eigs, strang_eigs(first_col), rhs, x, tol, max_iters);
    } else {
        const ComplexVector tt_eigs = embedding_eigs(first_row, first_col);
        ok = cgnr(t_eigs, tt_eigs, rhs, x, tol, max_iters);
    }

    auto rel_residual = [&](const Vector& sol) {
        const double nb = rhs.norm();
        return nb == 0.0 ? 0.0 : (toeplitz_mul(t_eigs, sol) - rhs).norm() / nb;
    };

    if (!ok || !(rel_residual(x) <= 1e-8)) {
        if (n <= 8192) {
            const Matrix t = toeplitz_dense(first_col, first_row);
            Eigen::PartialPivLU<Matrix> lu(t);
            x = lu.solve(rhs);
        }
        if (!x.allFinite() || !(rel_residual(x) <= 1e-8))
            throw SolverFailure("toeplitz_solve: residual above 1e-8 "
                                "(system singular or too ill-conditioned)");
    }
    return x;
}

}  // namespace mfdp
