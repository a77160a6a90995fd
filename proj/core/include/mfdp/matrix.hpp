#pragma once

#include <Eigen/Dense>

#include "mfdp/errors.hpp"

namespace mfdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Throws ContractViolation if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

/// Max |m - m^T| entry relative to the matrix scale.
double asymmetry(const Matrix& m);

bool is_symmetric(const Matrix& m, double tol = 1e-10);

}  // namespace mfdp
