#include "mfdp/treestamp.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "mfdp/errors.hpp"
#include "mfdp/fftmech.hpp"
#include "mfdp/matcore.hpp"
#include "mfdp/workloads.hpp"

namespace mfdp {

namespace {

int leaves_for(int n) {
    int l = 1;
    while (l < n) l *= 2;
    return l;
}

int height_of(int leaves) {
    int m = 0;
    while ((1 << m) < leaves) ++m;
    return m;
}

// Node index in the leaves-first bottom-up layout: height j, offset q.
int node_index(int leaves, int j, int q) {
    int base = 0;
    for (int h = 0; h < j; ++h) base += leaves >> h;
    return base + q;
}

}  // namespace

std::string to_string(MechanismFamily f) {
    switch (f) {
        case MechanismFamily::online_honaker: return "online_honaker";
        case MechanismFamily::optimal_honaker: return "optimal_honaker";
        case MechanismFamily::fft: return "fft";
        case MechanismFamily::fft_optimal: return "fft_optimal";
    }
    return "?";
}

std::pair<TreeEncoderSpec, Matrix> tree_encoder(int n) {
    if (n < 1) throw ContractViolation("tree_encoder: n must be >= 1");
    const int leaves = leaves_for(n);
    const int m = height_of(leaves);
    TreeEncoderSpec spec;
    spec.n = n;
    spec.leaves = leaves;
    spec.node_count = 2 * leaves - 1;
    spec.encoder = Matrix::Zero(spec.node_count, leaves);
    for (int j = 0; j <= m; ++j)
        for (int q = 0; q < (leaves >> j); ++q) {
            const int row = node_index(leaves, j, q);
            for (int leaf = q << j; leaf < ((q + 1) << j); ++leaf)
                spec.encoder(row, leaf) = 1.0;
        }
    Matrix embedding = Matrix::Zero(leaves, n);
    for (int i = 0; i < n; ++i) embedding(i, i) = 1.0;
    return {std::move(spec), std::move(embedding)};
}

namespace {

// Adds the from-below estimate of the height-h subtree whose leaves start at
// `start` into a decoder row: level j gets weight 2^(j-h) / (2 - 2^-h) on
// each of its nodes under the subtree.
void add_subtree_weights(Matrix& d, int row, int leaves, int start, int h) {
    const double denom = 2.0 - std::pow(2.0, -h);
    for (int j = 0; j <= h; ++j) {
        const double weight = std::pow(2.0, j - h) / denom;
        const int q0 = start >> j;
        const int count = 1 << (h - j);
        for (int q = q0; q < q0 + count; ++q)
            d(row, node_index(leaves, j, q)) += weight;
    }
}

}  // namespace

Matrix online_honaker_decoder(int n, bool completed) {
    if (n < 1) throw ContractViolation("online_honaker_decoder: n must be >= 1");
    const int leaves = leaves_for(n);
    const int m = height_of(leaves);
    Matrix d = Matrix::Zero(n, 2 * leaves - 1);
    for (int step = 1; step <= n; ++step) {
        if (completed && step == n && n != leaves) {
            // Tree completion: release via the full-tree root estimate and
            // zero the columns of nodes covering only virtual steps.
            const double denom = 2.0 - std::pow(2.0, -m);
            for (int j = 0; j <= m; ++j) {
                const double weight = std::pow(2.0, j - m) / denom;
                const int real_nodes = (n + (1 << j) - 1) >> j;  // ceil(n / 2^j)
                for (int q = 0; q < real_nodes; ++q)
                    d(step - 1, node_index(leaves, j, q)) = weight;
            }
            continue;
        }
        int start = 0;
        for (int h = m; h >= 0; --h)
            if (step & (1 << h)) {
                add_subtree_weights(d, step - 1, leaves, start, h);
                start += 1 << h;
            }
    }
    return d;
}

Matrix optimal_tree_decoder(int n) {
    auto [spec, embedding] = tree_encoder(n);
    const Matrix c = spec.encoder * embedding;
    return prefix_workload(n) * pinv(c);
}

Matrix stamp_encoder(const Matrix& c, int s) {
    if (s < 1) throw ContractViolation("stamp_encoder: s must be >= 1");
    Matrix out = Matrix::Zero(c.rows() * s, c.cols() * s);
    for (int r = 0; r < s; ++r)
        out.block(r * c.rows(), r * c.cols(), c.rows(), c.cols()) = c;
    return out;
}

Matrix restart_decoder(const Matrix& base_b, int s) {
    if (s < 1) throw ContractViolation("restart_decoder: s must be >= 1");
    const auto n = base_b.rows();
    const auto cols = base_b.cols();
    Matrix out = Matrix::Zero(n * s, cols * s);
    for (int r = 0; r < s; ++r) {
        out.block(r * n, r * cols, n, cols) = base_b;
        // Finished blocks contribute their final released total.
        for (int q = 0; q < r; ++q)
            out.block(r * n, q * cols, n, cols) = base_b.row(n - 1).replicate(n, 1);
    }
    return out;
}

Matrix optimal_stamp_decoder(const Matrix& a, const Matrix& stamped_c) {
    if (stamped_c.cols() != a.cols())
        throw ContractViolation("optimal_stamp_decoder: shape mismatch");
    Matrix p = pinv(stamped_c);
    // Rank check: pinv of a rank-deficient encoder cannot reconstruct A.
    if ((stamped_c * p * stamped_c - stamped_c).norm() > 1e-6 * stamped_c.norm() ||
        (p * stamped_c - Matrix::Identity(a.cols(), a.cols())).norm() >
            1e-6 * std::sqrt(static_cast<double>(a.cols())))
        throw SolverFailure("optimal_stamp_decoder: stamped encoder is rank-deficient");
    return a * p;
}

Matrix tree_gram(int n) {
    if (n < 1) throw ContractViolation("tree_gram: n must be >= 1");
    const int leaves = leaves_for(n);
    const int m = height_of(leaves);
    Matrix x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                x(i, j) = m + 1;
            } else {
                int xr = i ^ j, fl = 0;
                while (xr >>= 1) ++fl;
                x(i, j) = m - fl;
            }
        }
    return x;
}

double honaker_row_sq_norm(int step) {
    double total = 0.0;
    for (int j = 0; (1 << j) <= step; ++j)
        if (step & (1 << j)) total += 1.0 / (2.0 - std::pow(2.0, -j));
    return total;
}

double completed_row_sq_norm(int n) {
    const int leaves = leaves_for(n);
    const int m = height_of(leaves);
    const double denom = 2.0 - std::pow(2.0, -m);
    double total = 0.0;
    for (int j = 0; j <= m; ++j) {
        const int real_nodes = (n + (1 << j) - 1) >> j;
        const double w = std::pow(2.0, j - m) / denom;
        total += real_nodes * w * w;
    }
    return total;
}

namespace {

// Exact stamped sensitivity via the nonnegativity fast path on the
// block-diagonal Gram: patterns split per stamp, cross-stamp terms vanish.
double stamped_sens_sq_nonneg(const Matrix& x_base, int base_n, int s,
                              const ParticipationSchema& schema, int* arg_pattern) {
    double best = 0.0;
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        double total = 0.0;
        for (int r = 0; r < s; ++r) {
            std::vector<int> local;
            for (int g : schema.patterns[p])
                if (g >= r * base_n && g < (r + 1) * base_n) local.push_back(g - r * base_n);
            for (size_t a = 0; a < local.size(); ++a) {
                total += x_base(local[a], local[a]);
                for (size_t b2 = a + 1; b2 < local.size(); ++b2)
                    total += 2.0 * std::max(0.0, x_base(local[a], local[b2]));
            }
        }
        if (total > best) {
            best = total;
            if (arg_pattern) *arg_pattern = static_cast<int>(p);
        }
    }
    return best;
}

// Spectral upper bound on the stamped encoder from the base Gram: the pattern
// submatrix is block-diagonal across stamps, so its top eigenvalue is the max
// over per-stamp blocks.
double stamped_sens_sq_upper(const Matrix& gram_base, int base_n, int s,
                             const ParticipationSchema& schema, int* arg_pattern) {
    double lam2 = 0.0;
    for (size_t p = 0; p < schema.patterns.size(); ++p) {
        double top = 0.0;
        for (int r = 0; r < s; ++r) {
            std::vector<int> local;
            for (int g : schema.patterns[p])
                if (g >= r * base_n && g < (r + 1) * base_n) local.push_back(g - r * base_n);
            if (local.empty()) continue;
            Matrix g(local.size(), local.size());
            for (size_t a = 0; a < local.size(); ++a)
                for (size_t b2 = 0; b2 < local.size(); ++b2)
                    g(a, b2) = gram_base(local[a], local[b2]);
            Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
            top = std::max(top, eig.eigenvalues().maxCoeff());
        }
        if (top > lam2) {
            lam2 = top;
            if (arg_pattern) *arg_pattern = static_cast<int>(p);
        }
    }
    return lam2 * schema.k;
}

// tr(A M^-1 A^T) for block-diagonal M (s blocks of x_base) and A = prefix(n).
double prefix_trace_block_inv(const Matrix& x_base, int base_n, int s) {
    const int n_total = base_n * s;
    Eigen::LLT<Matrix> llt(x_base);
    if (llt.info() != Eigen::Success)
        throw SolverFailure("stamp loss: base Gram not positive definite");
    const Matrix l = llt.matrixL();
    double total = 0.0;
    // Columns of A belonging to block r: A[i, c] = 1 for i >= c.
    Matrix rhs(base_n, n_total);
    for (int r = 0; r < s; ++r) {
        rhs.setZero();
        for (int lc = 0; lc < base_n; ++lc) {
            const int c = r * base_n + lc;
            rhs.row(lc).segment(c, n_total - c).setOnes();
        }
        const Matrix z = l.triangularView<Eigen::Lower>().solve(rhs);
        total += z.squaredNorm();
    }
    return total;
}

Matrix fft_gram_dense(int base_n) {
    const Vector tau = fft_gram_first_col(base_n);
    return toeplitz_dense(tau, tau);
}

}  // namespace

StampSweepRow stamp_loss(MechanismFamily family, int n_total, int s,
                         const ParticipationSchema& schema) {
    if (schema.n != n_total)
        throw ContractViolation("stamp_loss: schema covers a different n");
    StampSweepRow row;
    row.family = family;
    row.stamps = s;
    if (s < 1 || n_total % s != 0) {
        row.skipped = true;
        return row;
    }
    const int base_n = n_total / s;
    row.base_n = base_n;

    const bool tree = family == MechanismFamily::online_honaker ||
                      family == MechanismFamily::optimal_honaker;
    const Matrix gram = tree ? tree_gram(base_n) : fft_gram_dense(base_n);

    int argp = -1;
    double sens_sq;
    if (tree) {
        sens_sq = stamped_sens_sq_nonneg(gram, base_n, s, schema, &argp);
        row.sens_method = SensMethod::nonneg;
    } else {
        sens_sq = stamped_sens_sq_upper(gram, base_n, s, schema, &argp);
        row.sens_method = SensMethod::upper;
    }
    row.sens = std::sqrt(sens_sq);

    double b_sq = 0.0;
    switch (family) {
        case MechanismFamily::online_honaker: {
            double base_sum = 0.0;
            for (int i = 1; i < base_n; ++i) base_sum += honaker_row_sq_norm(i);
            const double w_fin = (base_n == leaves_for(base_n))
                                     ? honaker_row_sq_norm(base_n)
                                     : completed_row_sq_norm(base_n);
            base_sum += w_fin;
            b_sq = s * base_sum + w_fin * base_n * (s * (s - 1.0) / 2.0);
            row.decoder = "restart";
            break;
        }
        case MechanismFamily::fft: {
            const double row_sq = gram(0, 0);  // uniform row norm of B_F
            b_sq = s * fft_decoder_sq_fro(base_n) + row_sq * base_n * (s * (s - 1.0) / 2.0);
            row.decoder = "restart";
            break;
        }
        case MechanismFamily::optimal_honaker:
        case MechanismFamily::fft_optimal:
            b_sq = prefix_trace_block_inv(gram, base_n, s);
            row.decoder = "optimal";
            break;
    }
    row.loss = sens_sq * b_sq;
    return row;
}

std::vector<StampSweepRow> sweep_stamps(MechanismFamily family, int n_total,
                                        const ParticipationSchema& schema,
                                        const std::vector<int>& stamp_candidates) {
    std::vector<StampSweepRow> rows;
    rows.reserve(stamp_candidates.size());
    for (int s : stamp_candidates) rows.push_back(stamp_loss(family, n_total, s, schema));
    return rows;
}

}  // namespace mfdp
