#include "warpstring/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace warpstring {

FiberModel FiberModel::circle(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("fiber length must be positive");
  return FiberModel{Kind::Circle, length, 0, 0.0};
}

FiberModel FiberModel::abstract_geodesic(double length, int m, double kappa_perp) {
  if (!(length > 0.0)) throw std::invalid_argument("geodesic length must be positive");
  if (m < 0) throw std::invalid_argument("transverse dimension must be >= 0");
  return FiberModel{Kind::AbstractGeodesic, length, m, kappa_perp};
}

bool FiberModel::same_as(const FiberModel& o) const {
  return kind == o.kind && length == o.length &&
         transverse_dimension == o.transverse_dimension &&
         transverse_curvature == o.transverse_curvature;
}

namespace {

std::vector<double> sample_points(const Window& w, int grid_n) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(grid_n) + 2 * w.probe_radii.size());
  for (int i = 0; i < grid_n; ++i)
    pts.push_back(-w.half_width + 2.0 * w.half_width * i / (grid_n - 1));
  for (double r : w.probe_radii) {
    pts.push_back(-r);
    pts.push_back(r);
  }
  return pts;
}

}  // namespace

WarpedMetric::WarpedMetric(ProfileExpr profile, FiberModel fiber, Window window)
    : profile_(std::move(profile)), fiber_(std::move(fiber)), window_(std::move(window)) {
  if (!(window_.half_width > 0.0)) throw std::invalid_argument("window half_width must be positive");
  if (window_.grid_n < 2) throw std::invalid_argument("window grid_n must be >= 2");
  for (std::size_t i = 0; i < window_.probe_radii.size(); ++i) {
    if (!(window_.probe_radii[i] > window_.half_width))
      throw std::invalid_argument("probe radii must exceed the window half width");
    if (i > 0 && !(window_.probe_radii[i] > window_.probe_radii[i - 1]))
      throw std::invalid_argument("probe radii must be strictly increasing");
  }
  if (profile_.depends_on("s"))
    throw std::invalid_argument("profile still depends on the family parameter s");

  profile_.certify_denominators(-window_.half_width, window_.half_width,
                                std::max(window_.grid_n, 101), window_.probe_radii);

  for (double x : sample_points(window_, std::max(window_.grid_n, 101))) {
    const double v = profile_.eval(x);
    if (!(v > 0.0))
      throw DomainError("warp profile is not positive at x = " + std::to_string(x));
  }
}

void WarpedMetric::require_certified(double x) const {
  if (std::abs(x) <= window_.half_width * (1.0 + 1e-12)) return;
  for (double r : window_.probe_radii)
    if (std::abs(std::abs(x) - r) <= 1e-12 * std::max(1.0, r)) return;
  throw DomainError("x = " + std::to_string(x) + " lies outside the certified region");
}

double WarpedMetric::base_curvature(double x) const {
  require_certified(x);
  return -d2f(x) / f(x);
}

double WarpedMetric::fiber_plane_curvature(double x) const {
  if (fiber_.transverse_dimension < 1)
    throw std::invalid_argument("fiber-plane curvature needs a transverse direction (m >= 1)");
  require_certified(x);
  const double fp = df(x);
  const double fv = f(x);
  return (fiber_.transverse_curvature - fp * fp) / (fv * fv);
}

MembershipVerdict WarpedMetric::membership(int grid_n) const {
  if (grid_n < 2) throw std::invalid_argument("membership grid_n must be >= 2");
  MembershipVerdict v;
  v.nonpositive_everywhere = true;
  v.ends_negative = true;

  const bool has_fiber_planes = fiber_.transverse_dimension >= 1;
  auto curvatures_at = [&](double x, double& kmax) {
    kmax = base_curvature(x);
    if (has_fiber_planes) kmax = std::max(kmax, fiber_plane_curvature(x));
  };

  for (int i = 0; i < grid_n; ++i) {
    const double x = -window_.half_width + 2.0 * window_.half_width * i / (grid_n - 1);
    double kmax;
    curvatures_at(x, kmax);
    if (kmax > tol_curv && v.nonpositive_everywhere) {
      v.nonpositive_everywhere = false;
      v.witness = x;
    }
  }

  double probe_max = -std::numeric_limits<double>::infinity();
  for (double r : window_.probe_radii) {
    for (double x : {-r, r}) {
      double kmax;
      curvatures_at(x, kmax);
      probe_max = std::max(probe_max, kmax);
      if (kmax > tol_curv && v.nonpositive_everywhere) {
        v.nonpositive_everywhere = false;
        v.witness = x;
      }
      if (kmax > -tol_curv && v.ends_negative) {
        v.ends_negative = false;
        if (!v.witness) v.witness = x;
      }
    }
  }
  if (!window_.probe_radii.empty() && probe_max < 0.0) v.end_bound_T = probe_max;
  return v;
}

UniformDistance uniform_distance(const WarpedMetric& g, const WarpedMetric& h, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("uniform distance order k must be 0, 1 or 2");
  if (!g.fiber().same_as(h.fiber()))
    throw std::invalid_argument("uniform distance requires matching fiber models");
  if (g.window().half_width != h.window().half_width ||
      g.window().probe_radii != h.window().probe_radii)
    throw std::invalid_argument("uniform distance requires matching windows");

  auto jet_gap = [&](double x) {
    double m = std::abs(g.f(x) - h.f(x));
    if (k >= 1) m = std::max(m, std::abs(g.df(x) - h.df(x)));
    if (k >= 2) m = std::max(m, std::abs(g.d2f(x) - h.d2f(x)));
    return m;
  };

  const Window& w = g.window();
  const int grid_n = std::max(w.grid_n, 2);
  double window_max = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = -w.half_width + 2.0 * w.half_width * i / (grid_n - 1);
    window_max = std::max(window_max, jet_gap(x));
  }

  UniformDistance out;
  out.value = window_max;
  double running = 0.0;
  bool strictly_increasing = !w.probe_radii.empty();
  for (std::size_t i = 0; i < w.probe_radii.size(); ++i) {
    const double r = w.probe_radii[i];
    const double c = std::max(jet_gap(-r), jet_gap(r));
    out.value = std::max(out.value, c);
    if (i == 0) {
      running = c;
    } else {
      if (!(c > running)) strictly_increasing = false;
      running = std::max(running, c);
    }
  }
  out.diverging = strictly_increasing && running > 10.0 * window_max;
  return out;
}

}  // namespace warpstring
