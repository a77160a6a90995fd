#pragma once

#include "mfdp/matrix.hpp"

namespace mfdp {

enum class WorkloadKind { prefix, momentum, momentum_cooldown };

struct WorkloadSpec {
    int n = 1;
    WorkloadKind kind = WorkloadKind::prefix;
    double beta = 0.0;
    double cooldown_fraction = 0.25;
    double cooldown_floor = 0.05;
};

/// Lower-triangular all-ones matrix: A[i,j] = 1 for j <= i.
Matrix prefix_workload(int n);

/// Heavy-ball momentum with cumulative output:
/// A[i,j] = sum_{t=j..i} beta^{t-j} = (1 - beta^{i-j+1}) / (1 - beta).
Matrix momentum_workload(int n, double beta);

/// Momentum workload with a linear learning-rate cooldown over the last
/// cooldown_fraction of steps. The ramp starts at 1 on the first cooled step
/// and reaches cooldown_floor at step n, so A[i,j] = sum_{t=j..i} eta_t beta^{t-j}.
Matrix momentum_cooldown_workload(const WorkloadSpec& spec);

/// Per-step learning-rate multipliers eta_1..eta_n for the cooldown schedule.
Vector cooldown_schedule(int n, double fraction, double floor);

Matrix make_workload(const WorkloadSpec& spec);

}  // namespace mfdp
