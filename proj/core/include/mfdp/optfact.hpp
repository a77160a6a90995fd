#pragma once

#include <utility>
#include <vector>

#include "mfdp/matrix.hpp"
#include "mfdp/participation.hpp"

namespace mfdp {

/// Constraint regimes for the factorization program
/// min tr(A^T A X^-1) s.t. X PD, u^T X u <= 1.
///  - full_corners: all b*2^(k-1) sign corners constrain X.
///  - pairwise_nonneg: only the b nonnegative corners, plus X[i,j] >= 0 on
///    pairs of steps that co-occur in some pattern.
///  - elementwise_nonneg: nonnegative corners plus X >= 0 elementwise.
enum class ConstraintMode { full_corners, pairwise_nonneg, elementwise_nonneg };
std::string to_string(ConstraintMode m);

struct SolveOptions {
    double gap_tol = 1e-6;  // relative duality gap target
    int max_iters = 50000;
    bool verbose = false;
};

/// Dual iterate: multipliers v (corners) and w (nonnegativity pairs), the
/// derived U = sum_u v_u u u^T - W~, the Lagrangian minimizer X, and the
/// certified objective values.
struct DualState {
    Vector v;
    Vector w;
    std::vector<std::pair<int, int>> pairs;
    Matrix U;
    Matrix X;
    double dual_value = 0.0;
    double primal_value = 0.0;
    double gap = 1.0;
};

struct GradientRecord {
    Vector dv;  // per-corner: u^T X u - 1
    Vector dw;  // per-pair: -2 X[i,j]
};

struct Factorization {
    Matrix B;
    Matrix C;
    double sens = 0.0;
    ParticipationSchema schema;
    SensMethod sens_method = SensMethod::brute;
};

/// Lagrangian minimizer X(v,w) = U^-1/2 (U^1/2 A^T A U^1/2)^1/2 U^-1/2 for
/// U = sum_u v_u u u^T - W~. U must be positive definite (rank error
/// otherwise); satisfies X U X = A^T A.
Matrix x_from_duals(const Vector& v, const Vector& w,
                    const std::vector<std::pair<int, int>>& pairs,
                    const Matrix& a, const CornerSet& corners);

/// Closed-form dual value g = 2 tr((U^1/2 A^T A U^1/2)^1/2) - sum_u v_u.
double dual_value(const Vector& v, const Vector& w,
                  const std::vector<std::pair<int, int>>& pairs,
                  const Matrix& a, const CornerSet& corners);

GradientRecord dual_gradient(const Vector& v, const Vector& w,
                             const std::vector<std::pair<int, int>>& pairs,
                             const Matrix& a, const CornerSet& corners);

struct SolveResult {
    Factorization factorization;
    DualState state;
    bool converged = false;
    int iterations = 0;
    double max_constraint_violation = 0.0;  // max_u u^T X u - 1 over mode corners
    double min_x_entry = 0.0;               // global min of X
    double min_x_constrained = 0.0;         // min over the mode's constrained pairs
};

/// Solves the constrained factorization program via Lagrangian dual ascent
/// (fixed-point iteration in full-corner mode, projected gradient with
/// backtracking otherwise) and extracts C with C^T C = X, B = A C^-1.
SolveResult solve(const Matrix& a, const ParticipationSchema& schema,
                  ConstraintMode mode, const SolveOptions& opts = {});

/// C = lower-triangular Cholesky-style factor with C^T C = X; B = A C^-1
/// (minimum-Frobenius decoder). X must be positive definite.
Factorization extract_factorization(const Matrix& x, const Matrix& a,
                                    const ParticipationSchema& schema,
                                    SensMethod sens_method = SensMethod::brute);

}  // namespace mfdp
