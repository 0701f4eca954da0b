#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warpstring/loop_solver.hpp"
#include "warpstring/rational.hpp"

namespace warpstring {

/// A converged closed geodesic modulo the circle reparametrization action.
struct GeodesicString {
  DiscreteLoop representative;
  double length = 0.0;
  double base_x = 0.0;                  // mean base coordinate
  int morse_index = 0;                  // negative count of the second variation
  int nullity = 1;                      // zero count; 1 means only the rotation mode
  int multiplicity = 1;                 // order of the isotropy subgroup
  std::optional<int> transverse_index;  // fiber contribution; empty = unknown
  bool nondegenerate = true;            // nullity == 1
  bool circle = true;                   // constant-x critical circle
};

/// One solver run inside the census, kept for diagnostics.
struct StartRecord {
  std::string kind;  // "root-seed" | "lattice" | "warm"
  double start_x = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  double final_length = 0.0;
  double final_grad = 0.0;
  double final_min_x = 0.0;
  bool monotone_length = true;  // along the whole solver trace
};

/// The census of a class: distinct strings, the rational invariant when the
/// metric is regular in this class, and the full search diagnostics.
struct CensusReport {
  std::vector<GeodesicString> strings;
  std::optional<Rational> F;  // empty when not regular
  bool regular = true;
  std::vector<StartRecord> starts;
  std::vector<std::string> notes;
  int n_used = 0;
  SolverOptions solver_used;   // fully resolved tolerances, for provenance
  double dedup_tol_used = 0.0;

  bool any_escape() const;
};

struct CensusOptions {
  int n_points = 256;
  int starts = 17;
  double dedup_tol = 0.0;  // 0 -> 1e-5 * fiber length
  SolverOptions solver;
};

/// Roots of f' on the window, found by sign-change bisection on a grid and
/// polished by Newton. Empty for profiles with identically vanishing f'.
std::vector<double> profile_critical_points(const WarpedMetric& g);

/// Two-phase search: circle seeds at every root of f' plus a deterministic
/// lattice of circle starts (plus optional warm loops, refined first).
/// Converged outcomes are identified up to cyclic shifts within dedup_tol.
/// Any degenerate string leaves F undefined rather than perturbed.
CensusReport enumerate_strings(const WarpedMetric& g, HomotopyClass beta,
                               const CensusOptions& opts,
                               const std::vector<DiscreteLoop>& warm_loops = {});

/// Inertia of the second variation at a near-critical loop: morse index =
/// negative count, nullity = zero count at tol_zero.
struct IndexResult {
  int morse_index = 0;
  int nullity = 0;
};
IndexResult morse_index(const WarpedMetric& g, const DiscreteLoop& loop,
                        const SolverOptions& opts = {});

/// Largest divisor d of both n and |winding| such that shifting by n/d
/// samples moves every point by at most dedup_tol (theta compared on the
/// circle).
int loop_multiplicity(const DiscreteLoop& loop, double fiber_length, double dedup_tol);

/// Cyclic-shift identification of two loops of equal sample count.
bool loops_equivalent(const DiscreteLoop& a, const DiscreteLoop& b, double fiber_length,
                      double tol);

/// m * #{k in Z, k=0 once and |k|>=1 twice : (2 pi k / L)^2 < K_perp} where
/// K_perp is the fiber-plane curvature at the circle. Zero when K_perp <= 0
/// or for circle fibers; invalid off critical circles.
int transverse_index(const WarpedMetric& g, const GeodesicString& s);

/// Sum of (-1)^(morse+transverse)/multiplicity over the strings, as an exact
/// reduced rational. Requires every string nondegenerate with known
/// transverse index.
Rational fuller_sum(const std::vector<GeodesicString>& strings);

}  // namespace warpstring
