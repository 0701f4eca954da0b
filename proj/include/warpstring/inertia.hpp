#pragma once

#include <Eigen/Core>

namespace warpstring {

/// Eigenvalue sign counts of a symmetric matrix.
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

/// Inertia of A with eigenvalues in [-tol_zero, tol_zero] classified as
/// zero. Primary route: two symmetric indefinite (Bunch-Kaufman)
/// factorizations of A -+ tol_zero*I, reading the counts off the block
/// diagonal; the shifts keep the factorizations away from singularity.
/// Falls back to a full symmetric eigendecomposition on breakdown.
Inertia matrix_inertia(const Eigen::MatrixXd& A, double tol_zero);

/// Number of eigenvalues of A strictly below tau, by factorization.
/// Throws std::runtime_error on factorization breakdown.
int eigenvalues_below(const Eigen::MatrixXd& A, double tau);

}  // namespace warpstring
