#pragma once

#include <string>
#include <vector>

#include "mfdp/matrix.hpp"

namespace mfdp {

/// (k,b)-participation over n = k*b steps: pattern i (0-based) is
/// {i, i+b, ..., i+(k-1)b}. Single participation is (k=1, b=n); every-step
/// participation is (k=n, b=1).
struct ParticipationSchema {
    int n = 0;
    int k = 0;
    int b = 0;
    std::vector<std::vector<int>> patterns;  // 0-based step indices, ascending
};

ParticipationSchema make_schema(int n, int k, int b);
ParticipationSchema single_participation(int n);
ParticipationSchema every_step_participation(int n);

/// Sign corners of the sensitivity polytope. Columns are the corner vectors.
/// With restricted_nonneg the b all-ones-on-pattern vectors; otherwise
/// b * 2^(k-1) sign vectors (the first nonzero entry is fixed to +1, since
/// ||Cu|| = ||C(-u)||).
struct CornerSet {
    Matrix vectors;                // n x m, one corner per column
    std::vector<int> pattern_of;   // pattern index per corner
    bool restricted_nonneg = false;
};

CornerSet corner_set(const ParticipationSchema& schema, bool restricted_nonneg);

enum class SensMethod { brute, nonneg, upper };
std::string to_string(SensMethod m);

/// Sensitivity value plus the pattern that attained it.
struct SensCertificate {
    double value = 0.0;
    int pattern_index = -1;
    SensMethod method = SensMethod::brute;
};

/// Exact sensitivity max_u ||C u||_2 over all sign corners. Gray-code
/// enumeration, O(b 2^(k-1) n); guarded at k <= 20.
SensCertificate sens_brute_cert(const Matrix& c, const ParticipationSchema& schema);
double sens_brute(const Matrix& c, const ParticipationSchema& schema);

/// Exact sensitivity max_pi sqrt(1^T X[pi,pi] 1) for X = C^T C, valid when X
/// is nonnegative on every pair of steps co-occurring in some pattern.
/// Entries in [-1e-12, 0) are clamped; anything lower raises
/// NonnegativityViolated (fall back to sens_brute).
SensCertificate sens_nonneg_fastpath_cert(const Matrix& c, const ParticipationSchema& schema);
double sens_nonneg_fastpath(const Matrix& c, const ParticipationSchema& schema);

/// Spectral upper bound lambda * sqrt(k), lambda = max_pi ||C[:,pi]||_2.
SensCertificate sens_upper_cert(const Matrix& c, const ParticipationSchema& schema);
double sens_upper(const Matrix& c, const ParticipationSchema& schema);

/// True iff X[i,j] >= -1e-12 for every pair of distinct steps co-occurring in
/// some pattern of the schema.
bool check_pairwise_nonneg(const Matrix& c, const ParticipationSchema& schema);

/// Pairs of distinct steps that co-occur in some pattern (i < j, 0-based).
std::vector<std::pair<int, int>> co_occurring_pairs(const ParticipationSchema& schema);

/// ||C G||_F for a vector-contribution matrix G with unit-bounded row norms.
/// Rows with norm > 1 + 1e-12 raise ContractViolation.
double vector_sens_check(const Matrix& c, const Matrix& g);

}  // namespace mfdp
