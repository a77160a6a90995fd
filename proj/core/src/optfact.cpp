#include "mfdp/optfact.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mfdp/errors.hpp"
#include "mfdp/matcore.hpp"

namespace mfdp {

std::string to_string(ConstraintMode m) {
    switch (m) {
        case ConstraintMode::full_corners: return "full_corners";
        case ConstraintMode::pairwise_nonneg: return "pairwise_nonneg";
        case ConstraintMode::elementwise_nonneg: return "elementwise_nonneg";
    }
    return "?";
}

namespace {

Matrix build_u(const Vector& v, const Vector& w,
               const std::vector<std::pair<int, int>>& pairs,
               const CornerSet& corners) {
    Matrix u = corners.vectors * v.asDiagonal() * corners.vectors.transpose();
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
        u(pairs[idx].first, pairs[idx].second) -= w(static_cast<Eigen::Index>(idx));
        u(pairs[idx].second, pairs[idx].first) -= w(static_cast<Eigen::Index>(idx));
    }
    Matrix sym = 0.5 * (u + u.transpose());
    return sym;
}

struct DualEval {
    bool ok = false;
    double g = 0.0;
    Matrix x;
    Matrix u;
};

// Evaluates g and X(v,w). When allow_ridge, an eigenvalue floor of
// 1e-9 * tr(U)/n is added transiently if U is full-rank only marginally.
DualEval evaluate(const Matrix& ata, const Vector& v, const Vector& w,
                  const std::vector<std::pair<int, int>>& pairs,
                  const CornerSet& corners, bool allow_ridge) {
    DualEval out;
    out.u = build_u(v, w, pairs, corners);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(out.u);
    Vector lam = eig.eigenvalues();
    const auto n = lam.size();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    if (lam(0) <= 1e-12 * scale) {
        if (!allow_ridge || lam(0) <= 0.0) return out;
        const double ridge = 1e-9 * out.u.trace() / static_cast<double>(n);
        if (!(ridge > 0.0)) return out;
        lam.array() += ridge;
    }
    const Matrix& q = eig.eigenvectors();
    const Matrix usq = q * lam.cwiseSqrt().asDiagonal() * q.transpose();
    const Matrix uisq = q * lam.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
    Matrix m = usq * ata * usq;
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eig2(m);
    Vector lam2 = eig2.eigenvalues().cwiseMax(0.0);
    const Matrix& q2 = eig2.eigenvectors();
    const Matrix s = q2 * lam2.cwiseSqrt().asDiagonal() * q2.transpose();
    out.g = 2.0 * s.trace() - v.sum();
    out.x = uisq * s * uisq;
    out.x = 0.5 * (out.x + out.x.transpose()).eval();
    out.ok = true;
    return out;
}

double max_corner_quadform(const Matrix& x, const CornerSet& corners) {
    double best = -std::numeric_limits<double>::infinity();
    const Matrix y = x * corners.vectors;
    for (Eigen::Index i = 0; i < corners.vectors.cols(); ++i)
        best = std::max(best, corners.vectors.col(i).dot(y.col(i)));
    return best;
}

struct FeasiblePoint {
    Matrix x;        // feasible (clamped, scaled) primal point
    double primal;   // tr(A^T A x^-1)
    double max_quadform;
};

FeasiblePoint feasibilize(const Matrix& ata, Matrix x,
                          const std::vector<std::pair<int, int>>& pairs,
                          const CornerSet& corners) {
    for (const auto& [i, j] : pairs)
        if (x(i, j) < 0.0) { x(i, j) = 0.0; x(j, i) = 0.0; }
    const double m = max_corner_quadform(x, corners);
    if (!(m > 0.0)) throw SolverFailure("optfact: degenerate primal iterate");
    x /= m;
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) {
        // Clamping can shave a hair off positive-definiteness.
        x += (1e-12 * x.trace() / static_cast<double>(x.rows())) *
             Matrix::Identity(x.rows(), x.cols());
        llt.compute(x);
        if (llt.info() != Eigen::Success)
            throw SolverFailure("optfact: feasibilized X not positive definite");
    }
    const double primal = llt.solve(ata).trace();
    const double quadform = max_corner_quadform(x, corners);
    return {std::move(x), primal, quadform};
}

}  // namespace

Matrix x_from_duals(const Vector& v, const Vector& w,
                    const std::vector<std::pair<int, int>>& pairs,
                    const Matrix& a, const CornerSet& corners) {
    const Matrix ata = a.transpose() * a;
    DualEval e = evaluate(ata, v, w, pairs, corners, /*allow_ridge=*/false);
    if (!e.ok)
        throw SolverFailure("x_from_duals: U is rank-deficient (smallest eigenvalue <= 1e-12 scale)");
    return e.x;
}

double dual_value(const Vector& v, const Vector& w,
                  const std::vector<std::pair<int, int>>& pairs,
                  const Matrix& a, const CornerSet& corners) {
    const Matrix ata = a.transpose() * a;
    DualEval e = evaluate(ata, v, w, pairs, corners, false);
    if (!e.ok) throw SolverFailure("dual_value: U is rank-deficient");
    return e.g;
}

GradientRecord dual_gradient(const Vector& v, const Vector& w,
                             const std::vector<std::pair<int, int>>& pairs,
                             const Matrix& a, const CornerSet& corners) {
    const Matrix ata = a.transpose() * a;
    DualEval e = evaluate(ata, v, w, pairs, corners, false);
    if (!e.ok) throw SolverFailure("dual_gradient: U is rank-deficient");
    GradientRecord grad;
    grad.dv.resize(corners.vectors.cols());
    const Matrix y = e.x * corners.vectors;
    for (Eigen::Index i = 0; i < corners.vectors.cols(); ++i)
        grad.dv(i) = corners.vectors.col(i).dot(y.col(i)) - 1.0;
    grad.dw.resize(static_cast<Eigen::Index>(pairs.size()));
    for (size_t idx = 0; idx < pairs.size(); ++idx)
        grad.dw(static_cast<Eigen::Index>(idx)) =
            -2.0 * e.x(pairs[idx].first, pairs[idx].second);
    return grad;
}

Factorization extract_factorization(const Matrix& x, const Matrix& a,
                                    const ParticipationSchema& schema,
                                    SensMethod sens_method) {
    require_finite(x, "extract_factorization");
    if (!is_symmetric(x, 1e-8))
        throw ContractViolation("extract_factorization: X not symmetric");
    const auto n = x.rows();
    // Reverse-order Cholesky yields a lower-triangular C with C^T C = X,
    // matching the streaming structure of the workloads.
    Matrix xr = x.colwise().reverse().rowwise().reverse();
    Eigen::LLT<Matrix> llt(xr);
    if (llt.info() != Eigen::Success)
        throw NotPsdError("extract_factorization: X not positive definite");
    Matrix l = llt.matrixL();
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            c(i, j) = l(n - 1 - j, n - 1 - i);
    Matrix b = c.transpose()
                   .triangularView<Eigen::Upper>()
                   .solve(a.transpose())
                   .transpose();
    Factorization f;
    f.B = std::move(b);
    f.C = std::move(c);
    f.schema = schema;
    f.sens_method = sens_method;
    switch (sens_method) {
        case SensMethod::brute: f.sens = sens_brute(f.C, schema); break;
        case SensMethod::nonneg: f.sens = sens_nonneg_fastpath(f.C, schema); break;
        case SensMethod::upper: f.sens = sens_upper(f.C, schema); break;
    }
    return f;
}

SolveResult solve(const Matrix& a, const ParticipationSchema& schema,
                  ConstraintMode mode, const SolveOptions& opts) {
    require_finite(a, "solve");
    if (a.rows() != schema.n || a.cols() != schema.n)
        throw ContractViolation("solve: A must be n x n for the schema");
    if (mode == ConstraintMode::full_corners) {
        const double count = static_cast<double>(schema.b) * std::pow(2.0, schema.k - 1);
        if (count > static_cast<double>(1 << 20))
            throw TooLargeError("solve: full corner set exceeds 2^20 vectors");
    }

    const bool nonneg = mode != ConstraintMode::full_corners;
    const CornerSet corners = corner_set(schema, nonneg);
    std::vector<std::pair<int, int>> pairs;
    if (mode == ConstraintMode::pairwise_nonneg) {
        pairs = co_occurring_pairs(schema);
    } else if (mode == ConstraintMode::elementwise_nonneg) {
        for (int i = 0; i < schema.n; ++i)
            for (int j = i + 1; j < schema.n; ++j) pairs.emplace_back(i, j);
    }

    const Matrix ata = a.transpose() * a;
    const auto m = corners.vectors.cols();
    Vector v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v(i) = corners.vectors.col(i).dot(ata * corners.vectors.col(i));
    v /= a.norm();
    Vector w = Vector::Constant(static_cast<Eigen::Index>(pairs.size()),
                                pairs.empty() ? 0.0 : 0.1 * v.mean());

    // g(c*(v,w)) = 2 sqrt(c) trS - c sum(v) is maximized at c = (trS/sum v)^2.
    auto rescaled = [&](Vector& vv, Vector& ww) {
        DualEval e = evaluate(ata, vv, ww, pairs, corners, true);
        if (!e.ok) return false;
        const double tr_s = 0.5 * (e.g + vv.sum());
        const double c = std::pow(tr_s / vv.sum(), 2.0);
        if (std::isfinite(c) && c > 0.0) { vv *= c; ww *= c; }
        return true;
    };
    if (!rescaled(v, w))
        throw SolverFailure("solve: could not find a full-rank initial U");

    int iters = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    DualState best;
    FeasiblePoint best_feas{Matrix(), std::numeric_limits<double>::infinity(), 0.0};

    auto check_gap = [&](const Vector& vv, const Vector& ww, const DualEval& e) {
        FeasiblePoint fp = feasibilize(ata, e.x, pairs, corners);
        if (e.g > fp.primal * (1.0 + 1e-9) + 1e-9)
            throw SolverFailure("solve: weak duality violated (internal error)");
        const double gap = (fp.primal - e.g) / std::abs(fp.primal);
        if (gap < best_gap) {
            best_gap = gap;
            best.v = vv;
            best.w = ww;
            best.pairs = pairs;
            best.U = e.u;
            best.X = fp.x;
            best.dual_value = e.g;
            best.primal_value = fp.primal;
            best.gap = gap;
            best_feas = std::move(fp);
        }
        return gap;
    };

    // Phase 1 (full-corner mode): fixed-point iteration
    // v <- diagpart((H_v^T A^T A H_v)^1/2).
    if (!nonneg && m <= 2048) {
        DualEval e = evaluate(ata, v, w, pairs, corners, true);
        for (; iters < opts.max_iters; ++iters) {
            const Matrix h = corners.vectors * v.cwiseMax(0.0).cwiseSqrt().asDiagonal();
            Matrix hm = h.transpose() * ata * h;
            hm = 0.5 * (hm + hm.transpose()).eval();
            Vector v_new = psd_sqrt(hm).diagonal();
            const double delta = (v_new - v).norm();
            v = v_new;
            if (iters % 20 == 19 || delta <= 1e-13 * v.norm()) {
                e = evaluate(ata, v, w, pairs, corners, true);
                if (e.ok && check_gap(v, w, e) <= opts.gap_tol) break;
                if (delta <= 1e-13 * v.norm()) break;
            }
        }
    }

    // Phase 2: projected gradient ascent with backtracking, all modes.
    if (best_gap > opts.gap_tol) {
        DualEval e = evaluate(ata, v, w, pairs, corners, true);
        if (!e.ok) {
            rescaled(v, w);
            e = evaluate(ata, v, w, pairs, corners, true);
            if (!e.ok) throw SolverFailure("solve: U rank collapse unrecoverable");
        }
        double step = 1.0;
        for (; iters < opts.max_iters; ++iters) {
            Vector dv(m);
            const Matrix y = e.x * corners.vectors;
            for (Eigen::Index i = 0; i < m; ++i)
                dv(i) = corners.vectors.col(i).dot(y.col(i)) - 1.0;
            Vector dw(static_cast<Eigen::Index>(pairs.size()));
            for (size_t idx = 0; idx < pairs.size(); ++idx)
                dw(static_cast<Eigen::Index>(idx)) =
                    -2.0 * e.x(pairs[idx].first, pairs[idx].second);

            bool accepted = false;
            for (int back = 0; back < 50; ++back) {
                Vector v2 = (v + step * dv).cwiseMax(0.0);
                Vector w2 = (w + step * dw).cwiseMax(0.0);
                DualEval e2 = evaluate(ata, v2, w2, pairs, corners, true);
                if (e2.ok && e2.g > e.g) {
                    v = std::move(v2);
                    w = std::move(w2);
                    e = std::move(e2);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (accepted) {
                step *= 1.5;
            } else {
                step = std::max(step, 1e-3);
                if (rescaled(v, w)) e = evaluate(ata, v, w, pairs, corners, true);
                if (!e.ok) throw SolverFailure("solve: U rank collapse unrecoverable");
            }
            if (iters % 25 == 24 || accepted == false) {
                if (check_gap(v, w, e) <= opts.gap_tol) break;
            }
        }
        if (best_gap > opts.gap_tol) check_gap(v, w, e);
    }

    if (!std::isfinite(best_gap))
        throw SolverFailure("solve: no feasible iterate found");

    SolveResult result;
    result.state = best;
    result.converged = best_gap <= opts.gap_tol;
    result.iterations = iters;
    result.max_constraint_violation = best_feas.max_quadform - 1.0;
    result.min_x_entry = best.X.minCoeff();
    double min_pih = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : co_occurring_pairs(schema))
        min_pih = std::min(min_pih, best.X(i, j));
    result.min_x_constrained = min_pih;
    result.factorization = extract_factorization(
        best.X, a, schema, nonneg ? SensMethod::nonneg : SensMethod::brute);
    return result;
}

}  // namespace mfdp
