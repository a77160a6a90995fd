#include "mfdp/workloads.hpp"

#include <cmath>

#include "mfdp/errors.hpp"

namespace mfdp {

namespace {

void check_spec(const WorkloadSpec& s) {
    if (s.n < 1) throw ContractViolation("workload: n must be >= 1");
    if (s.beta < 0.0 || s.beta >= 1.0)
        throw ContractViolation("workload: beta must be in [0, 1)");
    if (s.cooldown_floor <= 0.0 || s.cooldown_floor > 1.0)
        throw ContractViolation("workload: cooldown_floor must be in (0, 1]");
    if (s.cooldown_fraction < 0.0 || s.cooldown_fraction >= 1.0)
        throw ContractViolation("workload: cooldown_fraction must be in [0, 1)");
}

}  // namespace

Matrix prefix_workload(int n) {
    if (n < 1) throw ContractViolation("prefix_workload: n must be >= 1");
    Matrix a = Matrix::Zero(n, n);
    a.triangularView<Eigen::Lower>().setOnes();
    return a;
}

Matrix momentum_workload(int n, double beta) {
    WorkloadSpec s{n, WorkloadKind::momentum, beta};
    check_spec(s);
    Matrix a = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0, pw = 1.0;
        for (int i = j; i < n; ++i) {
            acc += pw;
            pw *= beta;
            a(i, j) = acc;
        }
    }
    return a;
}

Vector cooldown_schedule(int n, double fraction, double floor) {
    Vector eta = Vector::Ones(n);
    // The ramp starts at 1 on the first cooled step and ends at `floor` on
    // step n (fraction = 0.25, n = 2052: 513 cooled steps, 512 intervals).
    const int t0 = static_cast<int>(std::ceil((1.0 - fraction) * n));  // last full-rate step
    const int ramp = n - t0;       // number of cooled steps
    if (ramp <= 0) return eta;
    if (ramp == 1) {
        eta(n - 1) = floor;
        return eta;
    }
    for (int t = t0 + 1; t <= n; ++t)
        eta(t - 1) = 1.0 - (1.0 - floor) * static_cast<double>(t - t0 - 1) / (ramp - 1);
    return eta;
}

Matrix momentum_cooldown_workload(const WorkloadSpec& spec) {
    check_spec(spec);
    const int n = spec.n;
    const Vector eta = cooldown_schedule(n, spec.cooldown_fraction, spec.cooldown_floor);
    Matrix a = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0, pw = 1.0;
        for (int i = j; i < n; ++i) {
            acc += eta(i) * pw;
            pw *= spec.beta;
            a(i, j) = acc;
        }
    }
    return a;
}

Matrix make_workload(const WorkloadSpec& spec) {
    switch (spec.kind) {
        case WorkloadKind::prefix: return prefix_workload(spec.n);
        case WorkloadKind::momentum: return momentum_workload(spec.n, spec.beta);
        case WorkloadKind::momentum_cooldown: return momentum_cooldown_workload(spec);
    }
    throw ContractViolation("make_workload: unknown kind");
}

}  // namespace mfdp
