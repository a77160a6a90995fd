#include "mfdp/participation.hpp"

#include <algorithm>
#include <cmath>

#include "mfdp/errors.hpp"
#include "mfdp/matcore.hpp"

namespace mfdp {

ParticipationSchema make_schema(int n, int k, int b) {
    if (k < 1 || b < 1)
        throw InvalidSchemaError("make_schema: k and b must be >= 1");
    if (n != k * b)
        throw InvalidSchemaError("make_schema: n must equal k*b (got n=" +
                                 std::to_string(n) + ", k*b=" + std::to_string(k * b) + ")");
    ParticipationSchema s{n, k, b, {}};
    s.patterns.reserve(b);
    for (int i = 0; i < b; ++i) {
        std::vector<int> pi(k);
        for (int j = 0; j < k; ++j) pi[j] = i + j * b;
        s.patterns.push_back(std::move(pi));
    }
    return s;
}

ParticipationSchema single_participation(int n) { return make_schema(n, 1, n); }
ParticipationSchema every_step_participation(int n) { return make_schema(n, n, 1); }

std::string to_string(SensMethod m) {
    switch (m) {
        case SensMethod::brute: return "brute";
        case SensMethod::nonneg: return "nonneg";
        case SensMethod::upper: return "upper";
    }
    return "?";
}

CornerSet corner_set(const ParticipationSchema& schema, bool restricted_nonneg) {
    const int n = schema.n, k = schema.k;
    if (!restricted_nonneg && k > 20)
        throw TooLargeError("corner_set: 2^(k-1) corners with k > 20");
    const long per = restricted_nonneg ? 1L : (1L << (k - 1));
    CornerSet out;
    out.restricted_nonneg = restricted_nonneg;
    out.vectors = Matrix::Zero(n, per * static_cast<long>(schema.patterns.size()));
    long col = 0;
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        const auto& pi = schema.patterns[p];
        for (long mask = 0; mask < per; ++mask, ++col) {
            out.vectors(pi[0], col) = 1.0;  // sign symmetry: first entry +1
            for (int j = 1; j < k; ++j)
                out.vectors(pi[j], col) = ((mask >> (j - 1)) & 1) ? -1.0 : 1.0;
            out.pattern_of.push_back(static_cast<int>(p));
        }
    }
    return out;
}

namespace {

void check_cols(const Matrix& c, const ParticipationSchema& schema, const char* who) {
    if (c.cols() != schema.n)
        throw ContractViolation(std::string(who) + ": C has " + std::to_string(c.cols()) +
                                " columns, schema expects " + std::to_string(schema.n));
}

}  // namespace

SensCertificate sens_brute_cert(const Matrix& c, const ParticipationSchema& schema) {
    check_cols(c, schema, "sens_brute");
    require_finite(c, "sens_brute");
    if (schema.k > 20)
        throw TooLargeError("sens_brute: k > 20; use sens_upper or the nonneg fast path");
    SensCertificate cert{0.0, -1, SensMethod::brute};
    const int k = schema.k;
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        const auto& pi = schema.patterns[p];
        Matrix cols(c.rows(), k);
        for (int j = 0; j < k; ++j) cols.col(j) = c.col(pi[j]);
        // Gray-code walk over sign assignments with the first sign fixed +1.
        Vector acc = cols.rowwise().sum();
        Eigen::VectorXi sign = Eigen::VectorXi::Ones(k);
        double best = acc.squaredNorm();
        const long total = 1L << (k - 1);
        for (long g = 1; g < total; ++g) {
            const int bit = __builtin_ctzl(g);  // column (bit+1) flips
            const int j = bit + 1;
            sign(j) = -sign(j);
            acc += (2.0 * sign(j)) * cols.col(j);
            best = std::max(best, acc.squaredNorm());
        }
        if (std::sqrt(best) > cert.value) {
            cert.value = std::sqrt(best);
            cert.pattern_index = static_cast<int>(p);
        }
    }
    return cert;
}

double sens_brute(const Matrix& c, const ParticipationSchema& schema) {
    return sens_brute_cert(c, schema).value;
}

std::vector<std::pair<int, int>> co_occurring_pairs(const ParticipationSchema& schema) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& pi : schema.patterns)
        for (size_t a = 0; a < pi.size(); ++a)
            for (size_t b2 = a + 1; b2 < pi.size(); ++b2)
                pairs.emplace_back(pi[a], pi[b2]);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

bool check_pairwise_nonneg(const Matrix& c, const ParticipationSchema& schema) {
    check_cols(c, schema, "check_pairwise_nonneg");
    for (const auto& [i, j] : co_occurring_pairs(schema))
        if (c.col(i).dot(c.col(j)) < -1e-12) return false;
    return true;
}

SensCertificate sens_nonneg_fastpath_cert(const Matrix& c, const ParticipationSchema& schema) {
    check_cols(c, schema, "sens_nonneg_fastpath");
    require_finite(c, "sens_nonneg_fastpath");
    SensCertificate cert{0.0, -1, SensMethod::nonneg};
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        const auto& pi = schema.patterns[p];
        double total = 0.0;
        for (size_t a = 0; a < pi.size(); ++a) {
            total += c.col(pi[a]).squaredNorm();
            for (size_t b2 = a + 1; b2 < pi.size(); ++b2) {
                double x = c.col(pi[a]).dot(c.col(pi[b2]));
                if (x < -1e-12)
                    throw NonnegativityViolated(
                        "sens_nonneg_fastpath: X[" + std::to_string(pi[a]) + "," +
                        std::to_string(pi[b2]) + "] = " + std::to_string(x) +
                        " < -1e-12; fall back to sens_brute");
                if (x < 0.0) x = 0.0;
                total += 2.0 * x;
            }
        }
        if (std::sqrt(total) > cert.value) {
            cert.value = std::sqrt(total);
            cert.pattern_index = static_cast<int>(p);
        }
    }
    return cert;
}

double sens_nonneg_fastpath(const Matrix& c, const ParticipationSchema& schema) {
    return sens_nonneg_fastpath_cert(c, schema).value;
}

SensCertificate sens_upper_cert(const Matrix& c, const ParticipationSchema& schema) {
    check_cols(c, schema, "sens_upper");
    require_finite(c, "sens_upper");
    SensCertificate cert{0.0, -1, SensMethod::upper};
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        const auto& pi = schema.patterns[p];
        Matrix cols(c.rows(), static_cast<Eigen::Index>(pi.size()));
        for (size_t j = 0; j < pi.size(); ++j)
            cols.col(static_cast<Eigen::Index>(j)) = c.col(pi[j]);
        const double lambda = spectral_norm(cols);
        if (lambda > cert.value) {
            cert.value = lambda;
            cert.pattern_index = static_cast<int>(p);
        }
    }
    cert.value *= std::sqrt(static_cast<double>(schema.k));
    return cert;
}

double sens_upper(const Matrix& c, const ParticipationSchema& schema) {
    return sens_upper_cert(c, schema).value;
}

double vector_sens_check(const Matrix& c, const Matrix& g) {
    require_finite(c, "vector_sens_check: C");
    require_finite(g, "vector_sens_check: G");
    if (g.rows() != c.cols())
        throw ContractViolation("vector_sens_check: G must have one row per column of C");
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        if (g.row(i).norm() > 1.0 + 1e-12)
            throw ContractViolation("vector_sens_check: row " + std::to_string(i) +
                                    " of G has norm > 1");
    return (c * g).norm();
}

}  // namespace mfdp
