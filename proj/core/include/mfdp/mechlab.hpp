#pragma once

#include <cstdint>
#include <string>

#include "mfdp/matrix.hpp"
#include "mfdp/optfact.hpp"
#include "mfdp/participation.hpp"

namespace mfdp {

/// Total squared error at unit noise: L = sens^2(C) * ||B||_F^2.
double loss(const Matrix& b, const Matrix& c, const ParticipationSchema& schema,
            SensMethod method);

/// Per-step released noise variance: sens^2 * ||B[i,:]||^2. Sums to the loss.
Vector variance_profile(const Matrix& b, double sens);

/// Rescale (B, C) -> (B*sens, C/sens) so the encoder has unit sensitivity;
/// loss is unchanged.
Factorization normalize(const Factorization& f);

/// B * Z for Z with i.i.d. N(0, sigma^2) entries keyed by (seed, row, col);
/// deterministic and order-independent given the seed.
Matrix sample_noise(const Matrix& b, int d, double sigma, std::uint64_t seed);

/// Gaussian-mechanism zCDP: rho = sens^2 / (2 sigma^2).
double zcdp(double sens, double sigma);

/// Conservative conversion: epsilon = rho + 2 sqrt(rho ln(1/delta)).
double zcdp_to_epsilon(double rho, double delta);

struct MechanismReport {
    std::string mechanism_name;
    int n = 0, k = 0, b = 0;
    int stamps = 1;
    std::string decoder;
    double sens = 0.0;
    SensMethod sens_method = SensMethod::brute;
    double loss = 0.0;
    double root_loss = 0.0;
    Vector per_iterate_variance;
    double zcdp_rho = 0.0;
    double epsilon_at_delta = 0.0;
};

/// CSV header + row for the loss-table schema
/// mechanism,n,k,b,stamps,decoder,sens,sens_method,loss,root_loss
std::string report_csv_header();
std::string report_csv_row(const MechanismReport& r);

}  // namespace mfdp
