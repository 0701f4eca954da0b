#include "warpstring/family.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace warpstring {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Escape:
      return "escape";
    case EventKind::LengthCollapse:
      return "length-collapse";
    case EventKind::Degeneracy:
      return "degeneracy";
    case EventKind::MembershipExit:
      return "membership-exit";
    case EventKind::UniformDiscontinuity:
      return "uniform-discontinuity";
  }
  return "unknown";
}

MetricPath::MetricPath(ProfileExpr family, FiberModel fiber, Window window,
                       std::vector<double> samples)
    : family_(std::move(family)),
      fiber_(std::move(fiber)),
      window_(std::move(window)),
      samples_(std::move(samples)) {
  if (samples_.size() < 2) throw std::invalid_argument("a metric path needs at least two samples");
  if (samples_.front() != 0.0 || samples_.back() != 1.0)
    throw std::invalid_argument("path samples must start at 0 and end at 1");
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (!(samples_[i] > samples_[i - 1]))
      throw std::invalid_argument("path samples must be strictly increasing");
}

WarpedMetric MetricPath::slice(double s) const {
  return WarpedMetric(family_.bind_parameter(s), fiber_, window_);
}

SolveOutcome continue_string(const WarpedMetric& g_prev, const WarpedMetric& g_next,
                             const GeodesicString& s, const SolverOptions& opts) {
  (void)g_prev;  // the predictor is zeroth order: reuse the converged loop
  try {
    SolveOutcome refined = refine_newton(g_next, s.representative, opts);
    if (refined.status != SolveStatus::MaxIter) return refined;
  } catch (const std::invalid_argument&) {
    // gradient under the new metric exceeds the refinement threshold
  }
  return minimize(g_next, s.representative, opts);
}

std::vector<FamilyEvent> detect_events(const std::vector<SampleRecord>& records,
                                       double eps_len) {
  std::vector<FamilyEvent> events;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SampleRecord& r = records[i];
    const double s_lo = i == 0 ? r.s : records[i - 1].s;
    auto emit = [&](EventKind kind, std::string detail) {
      events.push_back({s_lo, r.s, kind, std::move(detail)});
    };

    if (!r.constructed) {
      emit(EventKind::MembershipExit, "slice construction failed: " + r.construct_error);
      continue;
    }
    if (!r.membership.nonpositive_everywhere || !r.membership.ends_negative) {
      std::string d = r.membership.nonpositive_everywhere ? "ends not negatively curved"
                                                          : "positive curvature on the window";
      if (r.membership.witness) d += " near x = " + std::to_string(*r.membership.witness);
      emit(EventKind::MembershipExit, d);
    }
    if (r.diverging) emit(EventKind::UniformDiscontinuity, "uniform distance diverging at probes");
    if (r.continuation_escaped || (r.census.strings.empty() && r.census.any_escape()))
      emit(EventKind::Escape, "search escaped to infinity");
    if (r.continuation_degenerate) emit(EventKind::Degeneracy, "continuation hit a degenerate string");
    for (const GeodesicString& s : r.census.strings) {
      if (!s.nondegenerate) {
        emit(EventKind::Degeneracy, "string with nullity " + std::to_string(s.nullity));
        break;
      }
    }
    for (const GeodesicString& s : r.census.strings) {
      if (s.length < eps_len) {
        emit(EventKind::LengthCollapse, "string length " + std::to_string(s.length));
        break;
      }
    }
  }
  return events;
}

FamilyReport run_family(const MetricPath& path, HomotopyClass beta, const FamilyOptions& opts) {
  FamilyReport report;
  const double ell = path.fiber().length;

  std::optional<WarpedMetric> prev_metric;
  std::vector<GeodesicString> prev_strings;

  for (double s : path.samples()) {
    SampleRecord rec;
    rec.s = s;

    std::optional<WarpedMetric> metric;
    try {
      metric = path.slice(s);
      rec.constructed = true;
    } catch (const std::exception& e) {
      rec.construct_error = e.what();
    }

    if (metric) {
      const int grid_n =
          opts.membership_grid_n > 0 ? opts.membership_grid_n : path.window().grid_n;
      rec.membership = metric->membership(grid_n);

      // Predictor-corrector from the previous sample's strings, then the
      // cold two-phase search; everything merges in the census dedup.
      std::vector<DiscreteLoop> warm;
      if (prev_metric) {
        const SolverOptions sopts = opts.census.solver;
        for (const GeodesicString& s_prev : prev_strings) {
          SolveOutcome cont = continue_string(*prev_metric, *metric, s_prev, sopts);
          switch (cont.status) {
            case SolveStatus::Converged:
              warm.push_back(std::move(cont.loop));
              break;
            case SolveStatus::Escaped:
              rec.continuation_escaped = true;
              break;
            case SolveStatus::Degenerate:
              rec.continuation_degenerate = true;
              break;
            case SolveStatus::MaxIter:
              break;
          }
        }
      }
      rec.census = enumerate_strings(*metric, beta, opts.census, warm);

      if (prev_metric) {
        const UniformDistance d = uniform_distance(*prev_metric, *metric, opts.uniform_k);
        rec.has_distance = true;
        rec.dist_prev = d.value;
        rec.diverging = d.diverging;
      }

      prev_strings = rec.census.strings;
      prev_metric = std::move(metric);
    } else {
      // A failed slice breaks the continuation chain.
      prev_metric.reset();
      prev_strings.clear();
    }

    report.records.push_back(std::move(rec));
  }

  const int w = beta.winding < 0 ? -beta.winding : beta.winding;
  const double eps_len = opts.census.solver.eps_len > 0.0 ? opts.census.solver.eps_len
                                                          : 1e-4 * ell * w;
  report.events = detect_events(report.records, eps_len);
  return report;
}

}  // namespace warpstring
