#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "warpstring/geometry.hpp"

namespace warpstring {

/// Free homotopy class of loops, indexed by the (nonzero) winding number
/// around the fiber geodesic.
struct HomotopyClass {
  int winding = 1;
};

/// Polygonal loop with n samples on the cylinder cover. thetas are lifted
/// fiber arc-length coordinates; the closure offset theta_n - theta_0 equals
/// winding * fiber length and is stored once, never recomputed.
struct DiscreteLoop {
  int n = 0;
  HomotopyClass cls;
  double closure = 0.0;
  std::vector<double> xs;
  std::vector<double> thetas;
};

/// Loop sitting at constant base coordinate x0 with uniform fiber speed.
DiscreteLoop make_circle_loop(const WarpedMetric& g, double x0, HomotopyClass beta, int n);

/// Checks n >= 8, winding != 0, finite coordinates, stored closure
/// consistency. Throws std::invalid_argument on violation.
void validate_loop(const DiscreteLoop& loop, double fiber_length);

/// Relabel samples by j positions along the loop, carrying lifts across the
/// closure seam. Energy and length are invariant under this.
DiscreteLoop rotate_loop(const DiscreteLoop& loop, int j);

/// Discrete Dirichlet energy E = (n/2) sum_i [dx_i^2 + f(mid_i)^2 dth_i^2].
/// Critical points are the constant-speed closed geodesics. Deterministic
/// summation order.
double loop_energy(const WarpedMetric& g, const DiscreteLoop& loop);

/// Polygonal length sum_i sqrt(dx_i^2 + f(mid_i)^2 dth_i^2); satisfies
/// length^2 <= 2 E with equality exactly at constant speed.
double loop_length(const WarpedMetric& g, const DiscreteLoop& loop);

/// Exact gradient of the discrete energy, laid out as (xs..., thetas...).
Eigen::VectorXd loop_gradient(const WarpedMetric& g, const DiscreteLoop& loop);

/// Exact symmetric Hessian of the discrete energy, 2n x 2n, assembled once
/// per call and mirrored.
Eigen::MatrixXd loop_hessian(const WarpedMetric& g, const DiscreteLoop& loop);

/// Hessian as symmetric triplets (both halves emitted) for sparse solves.
struct MatrixEntry {
  int row, col;
  double value;
};
std::vector<MatrixEntry> loop_hessian_entries(const WarpedMetric& g, const DiscreteLoop& loop);

/// Tangent of the reparametrization circle action at the loop (the
/// "rotation mode"), normalized. This is the direction Newton projects out.
Eigen::VectorXd rotation_mode(const DiscreteLoop& loop);

enum class SolveStatus { Converged, Escaped, Degenerate, MaxIter };

struct TracePoint {
  double length;
  double min_x;
  double max_x;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIter;
  DiscreteLoop loop;
  double length = 0.0;
  double grad_norm = 0.0;
  std::vector<TracePoint> trace;
  int iterations = 0;
  std::string note;
};

/// Solver thresholds. Zeros are resolved against (n, fiber length, winding):
/// tol_grad = 1e-12 n, switch_grad = 1e-2 n, tol_zero = 1e-8 n,
/// eps_len = 1e-4 * fiber_length * |winding|.
struct SolverOptions {
  double tol_grad = 0.0;
  double switch_grad = 0.0;
  double tol_zero = 0.0;
  double eps_len = 0.0;
  int max_iter = 20000;
  int max_newton = 80;
  int checkpoint_interval = 100;

  SolverOptions resolved(int n, double fiber_length, int winding) const;
};

/// Backtracking gradient descent (discrete curve shortening) on the energy,
/// switching to Newton refinement once the gradient is small. Detects escape
/// to infinity: length below eps_len with the loop past the lower window
/// bound, or three consecutive checkpoints outside the window with
/// decreasing length.
SolveOutcome minimize(const WarpedMetric& g, DiscreteLoop init, const SolverOptions& opts);

/// Newton iteration on the bordered system that pins the rotation mode;
/// quadratic convergence to grad_norm <= tol_grad at non-degenerate strings.
/// Reports Degenerate when the system is singular beyond the rotation mode
/// (nullity > 1). Precondition: grad_norm <= switch_grad.
SolveOutcome refine_newton(const WarpedMetric& g, const DiscreteLoop& loop,
                           const SolverOptions& opts);

const char* to_string(SolveStatus s);

}  // namespace warpstring
