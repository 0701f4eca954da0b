#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "warpstring/expr.hpp"

namespace warpstring {

/// Fiber of the warped product. The circle fiber is the degenerate case of
/// an abstract closed geodesic with no transverse directions (m = 0).
/// For m >= 1 the sectional curvature of the fiber on planes containing the
/// geodesic tangent is assumed constant along the geodesic.
struct FiberModel {
  enum class Kind { Circle, AbstractGeodesic };
  Kind kind = Kind::Circle;
  double length = 0.0;             // circumference / geodesic length, > 0
  int transverse_dimension = 0;    // m
  double transverse_curvature = 0.0;  // kappa_perp, used only when m >= 1

  static FiberModel circle(double length);
  static FiberModel abstract_geodesic(double length, int m, double kappa_perp);

  bool same_as(const FiberModel& o) const;
};

/// Compact analysis window [-half_width, half_width] plus probe radii
/// outside it that stand in for the two ends.
struct Window {
  double half_width = 6.0;
  int grid_n = 241;
  std::vector<double> probe_radii = {10.0, 20.0, 40.0};
};

/// Result of the curvature-sign check: non-positivity over the window and
/// strict negativity at the probe radii.
struct MembershipVerdict {
  bool nonpositive_everywhere = false;
  bool ends_negative = false;
  std::optional<double> witness;       // an x where a check fails
  std::optional<double> end_bound_T;   // max probe curvature, when negative
};

/// The metric dx^2 + f(x)^2 g_Y on R x Y. Construction certifies f > 0 on
/// the window and at the probe radii, and certifies all division nodes of
/// the profile (and of its derivatives) nonzero there. Immutable; all
/// operations are pure.
class WarpedMetric {
 public:
  WarpedMetric(ProfileExpr profile, FiberModel fiber, Window window);

  double f(double x) const { return profile_.eval(x); }
  double df(double x) const { return profile_.derivative(1).eval(x); }
  double d2f(double x) const { return profile_.derivative(2).eval(x); }

  /// Sectional curvature of planes containing the base direction:
  /// K = -f''(x)/f(x). Only defined on the certified region.
  double base_curvature(double x) const;

  /// Sectional curvature of fiber-fiber planes containing the fiber
  /// geodesic tangent: K = (kappa_perp - f'(x)^2)/f(x)^2. Requires m >= 1.
  double fiber_plane_curvature(double x) const;

  /// Sample all defined plane curvatures on a grid over the window and at
  /// the probe radii; deterministic for a fixed grid_n.
  MembershipVerdict membership(int grid_n) const;

  const ProfileExpr& profile() const { return profile_; }
  const FiberModel& fiber() const { return fiber_; }
  const Window& window() const { return window_; }

  /// Sign tolerance for curvature classifications. Profiles are smooth
  /// closed forms, so any noise is pure floating point.
  static constexpr double tol_curv = 1e-9;

 private:
  void require_certified(double x) const;

  ProfileExpr profile_;
  FiberModel fiber_;
  Window window_;
};

/// Grid sup of max_{j<=k} |f^(j) - h^(j)| over the shared window plus probe
/// radii. `diverging` is set when the per-probe partial maxima strictly
/// increase and the last exceeds 10x the window maximum; it is the
/// operational stand-in for an infinite sup over a non-compact space.
struct UniformDistance {
  double value = 0.0;
  bool diverging = false;
};

UniformDistance uniform_distance(const WarpedMetric& g, const WarpedMetric& h, int k);

}  // namespace warpstring
