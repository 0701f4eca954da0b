#include "warpstring/inertia.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef WARPSTRING_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace warpstring {

#ifdef WARPSTRING_HAVE_LAPACKE

int eigenvalues_below(const Eigen::MatrixXd& A, double tau) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXd B = A;
  B.diagonal().array() -= tau;

  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, B.data(), n, ipiv.data());
  if (info != 0) throw std::runtime_error("dsytrf breakdown");

  // Sylvester: the factored block diagonal carries the eigenvalue signs.
  int negatives = 0;
  lapack_int k = 0;
  while (k < n) {
    if (ipiv[static_cast<std::size_t>(k)] > 0) {
      if (B(k, k) < 0.0) ++negatives;
      ++k;
    } else {
      // 2x2 pivot block [[a,b],[b,c]]
      const double a = B(k, k);
      const double b = B(k + 1, k);
      const double c = B(k + 1, k + 1);
      const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
      if (0.5 * ((a + c) + disc) < 0.0) ++negatives;
      if (0.5 * ((a + c) - disc) < 0.0) ++negatives;
      k += 2;
    }
  }
  return negatives;
}

#else

int eigenvalues_below(const Eigen::MatrixXd& A, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < tau) ++count;
  return count;
}

#endif

namespace {

Inertia inertia_by_eigensolver(const Eigen::MatrixXd& A, double tol_zero) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigendecomposition failed");
  Inertia out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam < -tol_zero)
      ++out.negative;
    else if (lam <= tol_zero)
      ++out.zero;
    else
      ++out.positive;
  }
  return out;
}

}  // namespace

Inertia matrix_inertia(const Eigen::MatrixXd& A, double tol_zero) {
  const int n = static_cast<int>(A.rows());
  try {
    const int below_lo = eigenvalues_below(A, -tol_zero);
    const int below_hi = eigenvalues_below(A, tol_zero);
    if (below_hi < below_lo) throw std::runtime_error("inconsistent shifted counts");
    return Inertia{below_lo, below_hi - below_lo, n - below_hi};
  } catch (const std::runtime_error&) {
    return inertia_by_eigensolver(A, tol_zero);
  }
}

}  // namespace warpstring
