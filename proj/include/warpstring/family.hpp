#pragma once

#include <optional>
#include <string>
#include <vector>

#include "warpstring/census.hpp"
#include "warpstring/geometry.hpp"

namespace warpstring {

/// One-parameter family of warped metrics: a two-variable profile f(x, s)
/// sliced at sample values of s in [0, 1].
class MetricPath {
 public:
  MetricPath(ProfileExpr family, FiberModel fiber, Window window, std::vector<double> samples);

  /// Bind s and construct the slice; certification can throw DomainError.
  WarpedMetric slice(double s) const;

  const std::vector<double>& samples() const { return samples_; }
  const FiberModel& fiber() const { return fiber_; }
  const Window& window() const { return window_; }
  const ProfileExpr& family() const { return family_; }

 private:
  ProfileExpr family_;
  FiberModel fiber_;
  Window window_;
  std::vector<double> samples_;
};

enum class EventKind { Escape, LengthCollapse, Degeneracy, MembershipExit, UniformDiscontinuity };

const char* to_string(EventKind k);

/// Detected events carry the parameter interval they were observed on;
/// detectors are threshold checks between samples, not point statements.
struct FamilyEvent {
  double s_lo = 0.0;
  double s_hi = 0.0;
  EventKind kind = EventKind::Escape;
  std::string detail;
};

/// Everything recorded at one parameter sample.
struct SampleRecord {
  double s = 0.0;
  bool constructed = false;
  std::string construct_error;
  MembershipVerdict membership;
  CensusReport census;
  bool has_distance = false;
  double dist_prev = 0.0;
  bool diverging = false;
  bool continuation_escaped = false;
  bool continuation_degenerate = false;
};

struct FamilyReport {
  std::vector<SampleRecord> records;
  std::vector<FamilyEvent> events;
};

struct FamilyOptions {
  CensusOptions census;
  int membership_grid_n = 0;  // 0 -> window grid_n
  int uniform_k = 2;
};

/// Sweep the samples in order: membership check, census warm-started from
/// the previous sample's strings, uniform distance to the previous slice,
/// and event detection. Per-sample failures become events, never aborts.
FamilyReport run_family(const MetricPath& path, HomotopyClass beta, const FamilyOptions& opts);

/// Predictor-corrector continuation of one string to the next metric:
/// reuse the loop, correct with Newton, fall back to full minimization.
SolveOutcome continue_string(const WarpedMetric& g_prev, const WarpedMetric& g_next,
                             const GeodesicString& s, const SolverOptions& opts);

/// Threshold detectors over assembled records (also used by run_family).
std::vector<FamilyEvent> detect_events(const std::vector<SampleRecord>& records,
                                       double eps_len);

}  // namespace warpstring
