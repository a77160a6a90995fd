#include "mfdp/fftmech.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fft_util.hpp"
#include "mfdp/errors.hpp"
#include "mfdp/matcore.hpp"
#include "mfdp/rng.hpp"

namespace mfdp {

ComplexVector dft_eigs(int n) {
    if (n < 1) throw ContractViolation("dft_eigs: n must be >= 1");
    ComplexVector eigs = ComplexVector::Zero(2 * n);
    eigs(0) = static_cast<double>(n);
    for (int k = 1; k < 2 * n; k += 2) {
        const std::complex<double> denom =
            1.0 - std::exp(std::complex<double>(0.0, -M_PI * k / n));
        eigs(k) = 2.0 / denom;
    }
    return eigs;
}

double vdft_l1(int n) {
    double total = n;
    for (int k = 1; k < 2 * n; k += 2) total += 1.0 / std::sin(M_PI * k / (2.0 * n));
    return total;
}

double mse_analytic(int n, double rho, double kappa) {
    if (n < 1) throw ContractViolation("mse_analytic: n must be >= 1");
    if (rho <= 0.0) throw ContractViolation("mse_analytic: rho must be > 0");
    const double l1 = vdft_l1(n);
    return kappa * kappa * l1 * l1 / (2.0 * rho * n * static_cast<double>(n));
}

double mse_lower_bound(int n, double rho) {
    if (n < 1) throw ContractViolation("mse_lower_bound: n must be >= 1");
    if (rho <= 0.0) throw ContractViolation("mse_lower_bound: rho must be > 0");
    const double t = 2.0 + std::log((2.0 * n + 1.0) / 3.0) +
                     std::log(2.0 * n + 1.0) / (2.0 * n);
    return t * t / (2.0 * rho * M_PI * M_PI);
}

Vector fft_prefix_release(const Vector& x, double rho, double kappa,
                          std::uint64_t seed) {
    const int n = static_cast<int>(x.size());
    if (n < 1) throw ContractViolation("fft_prefix_release: empty input");
    if (rho <= 0.0) throw ContractViolation("fft_prefix_release: rho must be > 0");
    if (kappa <= 0.0) throw ContractViolation("fft_prefix_release: kappa must be > 0");
    if (x.cwiseAbs().maxCoeff() > kappa * (1.0 + 1e-12))
        throw ContractViolation("fft_prefix_release: |x_i| must be <= kappa");
    require_finite(x, "fft_prefix_release");

    const ComplexVector eigs = dft_eigs(n);
    const double scale = std::sqrt(kappa * kappa * vdft_l1(n) / (4.0 * n * rho));
    ComplexVector noise(2 * n);
    for (int k = 0; k < 2 * n; ++k)
        noise(k) = std::sqrt(eigs(k)) * rng::keyed_complex_gaussian(seed, k);
    // F* Sigma^(1/2) w restricted to the first n coordinates, real part.
    const ComplexVector z = detail::unitary_idft(noise);
    Vector out(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += x(i);
        out(i) = acc + scale * z(i).real();
    }
    return out;
}

namespace {

// Columns of the real circulant M = F* sqrt(Sigma) F, computed by FFT.
// shift selects the column index in the 2n x 2n circulant.
Vector circulant_sqrt_column(const ComplexVector& sqrt_eigs, int shift, int two_n) {
    ComplexVector e = ComplexVector::Zero(two_n);
    e(shift) = 1.0;
    const ComplexVector f = detail::unitary_dft(e);
    const ComplexVector col = detail::unitary_idft(sqrt_eigs.cwiseProduct(f).eval());
    double max_imag = 0.0;
    for (int i = 0; i < two_n; ++i) max_imag = std::max(max_imag, std::abs(col(i).imag()));
    if (max_imag > 1e-10)
        throw SolverFailure("real_fft_encoder: imaginary residual above 1e-10");
    return col.real();
}

}  // namespace

Matrix real_fft_encoder(int n) {
    if (n < 1) throw ContractViolation("real_fft_encoder: n must be >= 1");
    const ComplexVector sqrt_eigs = dft_eigs(n).cwiseSqrt();
    Matrix c(2 * n, n);
    for (int j = 0; j < n; ++j) c.col(j) = circulant_sqrt_column(sqrt_eigs, j, 2 * n);
    return c;
}

Matrix real_fft_decoder(int n) {
    if (n < 1) throw ContractViolation("real_fft_decoder: n must be >= 1");
    const ComplexVector sqrt_eigs = dft_eigs(n).cwiseSqrt();
    Matrix b(n, 2 * n);
    // Rows i of M are the reversed/shifted generator; M is circulant, so row i
    // equals column i of M^T. M real => M^T generated by conj(sqrt_eigs).
    const ComplexVector conj_eigs = sqrt_eigs.conjugate();
    for (int i = 0; i < n; ++i)
        b.row(i) = circulant_sqrt_column(conj_eigs, i, 2 * n).transpose();
    return b;
}

Vector fft_gram_first_col(int n) {
    const ComplexVector abs_eigs = dft_eigs(n).cwiseAbs().cast<std::complex<double>>();
    ComplexVector col = detail::idft(abs_eigs) / (2.0 * n);
    Vector out(n);
    for (int i = 0; i < n; ++i) out(i) = col(i).real();
    return out;
}

Vector fft_optimal_decode(const Vector& input, int n) {
    if (n < 1) throw ContractViolation("fft_optimal_decode: n must be >= 1");
    if (input.size() != 2 * n)
        throw ContractViolation("fft_optimal_decode: input must have length 2n");
    require_finite(input, "fft_optimal_decode");
    // y = C_F^T u via one circulant multiply with conj(sqrt(Sigma)) eigenvalues.
    const ComplexVector sqrt_eigs = dft_eigs(n).cwiseSqrt();
    const Vector y2n = detail::circulant_mul(sqrt_eigs.conjugate(), input);
    const Vector y = y2n.head(n);
    // Solve the SPD Toeplitz system (C_F^T C_F) z = y, then prefix-sum.
    const Vector tau = fft_gram_first_col(n);
    const Vector z = toeplitz_solve(tau, tau, y);
    Vector out(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += z(i);
        out(i) = acc;
    }
    return out;
}

double fft_decoder_sq_fro(int n) { return 0.5 * vdft_l1(n); }

SensCertificate fft_multi_epoch_sens(int n, const ParticipationSchema& schema) {
    if (schema.n != n)
        throw ContractViolation("fft_multi_epoch_sens: schema covers a different n");
    const Vector tau = fft_gram_first_col(n);
    auto gram_for = [&](const std::vector<int>& pi) {
        const int k = static_cast<int>(pi.size());
        Matrix g(k, k);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) g(p, q) = tau(std::abs(pi[p] - pi[q]));
        return g;
    };
    const double corner_count = static_cast<double>(schema.b) * std::pow(2.0, schema.k - 1);
    SensCertificate cert;
    if (schema.k <= 16 && corner_count <= (1 << 16)) {
        // Exact: max over sign vectors of u^T G u per pattern (Gray-code walk).
        cert.method = SensMethod::brute;
        for (size_t p = 0; p < schema.patterns.size(); ++p) {
            const Matrix g = gram_for(schema.patterns[p]);
            const int k = schema.k;
            Vector u = Vector::Ones(k);
            double quad = u.dot(g * u);
            double best = quad;
            for (long gray = 1; gray < (1L << (k - 1)); ++gray) {
                const int j = __builtin_ctzl(gray) + 1;
                // flipping u_j changes u^T G u by -4 u_j * (G u)_j + 4 G_jj... do it directly
                u(j) = -u(j);
                quad = u.dot(g * u);
                best = std::max(best, quad);
            }
            if (std::sqrt(best) > cert.value) {
                cert.value = std::sqrt(best);
                cert.pattern_index = static_cast<int>(p);
            }
        }
    } else {
        cert.method = SensMethod::upper;
        double lam2 = 0.0;
        for (size_t p = 0; p < schema.patterns.size(); ++p) {
            Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_for(schema.patterns[p]));
            const double top = eig.eigenvalues().maxCoeff();
            if (top > lam2) {
                lam2 = top;
                cert.pattern_index = static_cast<int>(p);
            }
        }
        cert.value = std::sqrt(lam2 * schema.k);
    }
    return cert;
}

}  // namespace mfdp
