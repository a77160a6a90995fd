#pragma once

#include <string>
#include <vector>

#include "mfdp/matrix.hpp"
#include "mfdp/participation.hpp"

namespace mfdp {

/// Complete binary tree over 2^ceil(log2 n) leaves. Encoder rows are 0/1
/// indicators of the leaves under each node; nodes are ordered leaves first
/// (left to right), then internal levels bottom-up, root last.
struct TreeEncoderSpec {
    int n = 0;
    int leaves = 0;
    int node_count = 0;
    Matrix encoder;  // node_count x leaves
};

/// Returns the tree encoder plus the embedding E (leaves x n) selecting the
/// first n leaf columns, so the effective encoder on real steps is encoder*E.
std::pair<TreeEncoderSpec, Matrix> tree_encoder(int n);

/// Online Honaker decoder D (n x node_count) with D * (C_tree E) =
/// prefix_workload(n). Step i combines the from-below estimates of the
/// subtrees in i's binary decomposition, weighting level j of a height-h
/// subtree by 2^(j-h) / (2 - 2^-h). With completed=true and n not a power of
/// two, the final step instead uses the full-tree root estimate with the
/// columns of all-virtual nodes zeroed.
Matrix online_honaker_decoder(int n, bool completed);

/// Pseudoinverse decoder B = prefix_workload(n) * pinv(C_tree E); the full
/// (rather than online) Honaker estimator.
Matrix optimal_tree_decoder(int n);

/// Block-diagonal repetition of C (s stamps).
Matrix stamp_encoder(const Matrix& c, int s);

/// Stamped prefix-sum decoder that reuses base_B per block and repeats its
/// final row below the block diagonal (carries finished-block totals
/// forward). Only valid when base_B decodes prefix sums for its block.
Matrix restart_decoder(const Matrix& base_b, int s);

/// Optimal decoder for a stamped encoder: A * pinv(stamped_C); valid for any
/// workload A (momentum included).
Matrix optimal_stamp_decoder(const Matrix& a, const Matrix& stamped_c);

// ---- analytic fast paths (no giant matrices) used by the stamp sweeps ----

/// Gram matrix X[i,j] = (C_tree E)^T (C_tree E) = number of common ancestors
/// of leaves i and j (counting the leaves themselves).
Matrix tree_gram(int n);

/// Squared row norm of the online Honaker decoder for step i (uncompleted).
double honaker_row_sq_norm(int step);

/// Squared norm of the completed, virtual-zeroed final row for n steps.
double completed_row_sq_norm(int n);

enum class MechanismFamily { online_honaker, optimal_honaker, fft, fft_optimal };
std::string to_string(MechanismFamily f);

struct StampSweepRow {
    MechanismFamily family = MechanismFamily::online_honaker;
    int stamps = 1;
    int base_n = 0;
    double sens = 0.0;
    SensMethod sens_method = SensMethod::nonneg;
    double loss = 0.0;
    std::string decoder;
    bool skipped = false;   // candidate did not divide n_total
};

/// Loss table over stamp candidates for one mechanism family under a schema.
/// Candidates that do not divide n_total are reported as skipped.
std::vector<StampSweepRow> sweep_stamps(MechanismFamily family, int n_total,
                                        const ParticipationSchema& schema,
                                        const std::vector<int>& stamp_candidates);

/// Convenience: the sweep row for a single (family, s) pair.
StampSweepRow stamp_loss(MechanismFamily family, int n_total, int s,
                         const ParticipationSchema& schema);

}  // namespace mfdp
