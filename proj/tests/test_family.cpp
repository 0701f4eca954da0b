#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "warpstring/family.hpp"
#include "warpstring/report.hpp"

using namespace warpstring;

namespace {

const char* kInterpolation = "(1-s)*exp(x)+s*(x^2+1)";

FamilyOptions fast_options(int n = 64, int starts = 9) {
  FamilyOptions opts;
  opts.census.n_points = n;
  opts.census.starts = starts;
  return opts;
}

MetricPath path_of(const char* family, std::vector<double> samples) {
  return MetricPath(ProfileExpr::parse(family), FiberModel::circle(2.0 * M_PI), Window{},
                    std::move(samples));
}

std::vector<double> linear_samples(int count) {
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = double(i) / (count - 1);
  return s;
}

// slice critical point of the interpolation family, by the scalar oracle
double root_oracle(double s) {
  return oracles::find_root([&](double x) { return (1.0 - s) * std::exp(x) + 2.0 * s * x; },
                            [&](double x) { return (1.0 - s) * std::exp(x) + 2.0 * s; },
                            -14.0, 2.0);
}

}  // namespace

TEST_CASE("metric path validation") {
  CHECK_THROWS_AS(path_of("x^2+1+s", {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(path_of("x^2+1+s", {0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(path_of("x^2+1+s", {0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(path_of("x^2+1+s", {0.0, 0.5, 1.0}));
}

TEST_CASE("continue_string tracks a moving critical point") {
  const SolverOptions sopts;

  SUBCASE("constant shift keeps the waist at zero") {
    const WarpedMetric g1 = WarpedMetric(ProfileExpr::parse("x^2+1"),
                                         FiberModel::circle(2.0 * M_PI), Window{});
    const WarpedMetric g2 = WarpedMetric(ProfileExpr::parse("x^2+1.1"),
                                         FiberModel::circle(2.0 * M_PI), Window{});
    const CensusReport rep = enumerate_strings(g1, HomotopyClass{1}, CensusOptions{64, 9, 0.0, {}});
    REQUIRE(rep.strings.size() == 1);
    const SolveOutcome out = continue_string(g1, g2, rep.strings[0], sopts);
    REQUIRE(out.status == SolveStatus::Converged);
    double mean = 0.0;
    for (double v : out.loop.xs) mean += v;
    mean /= out.loop.n;
    CHECK(std::abs(mean) <= 1e-8);
    CHECK(std::abs(out.length - 2.0 * M_PI * 1.1) <= 1e-6);
  }

  SUBCASE("downward continuation drifts toward minus infinity with the root") {
    const ProfileExpr fam = ProfileExpr::parse(kInterpolation);
    const std::vector<double> s_values = {0.5, 0.3, 0.2, 0.1, 0.05, 0.02};

    WarpedMetric prev(fam.bind_parameter(s_values[0]), FiberModel::circle(2.0 * M_PI), Window{});
    CensusReport rep = enumerate_strings(prev, HomotopyClass{1}, CensusOptions{64, 9, 0.0, {}});
    REQUIRE(rep.strings.size() == 1);
    GeodesicString current = rep.strings[0];

    double prev_x = current.base_x;
    for (std::size_t i = 1; i < s_values.size(); ++i) {
      const double s = s_values[i];
      WarpedMetric next(fam.bind_parameter(s), FiberModel::circle(2.0 * M_PI), Window{});
      const SolveOutcome out = continue_string(prev, next, current, SolverOptions{});
      REQUIRE(out.status == SolveStatus::Converged);
      double mean = 0.0;
      for (double v : out.loop.xs) mean += v;
      mean /= out.loop.n;
      CHECK(mean < prev_x);  // monotone drift
      CHECK(std::abs(mean - root_oracle(s)) <= 1e-4);
      current.representative = out.loop;
      current.base_x = mean;
      current.length = out.length;
      prev_x = mean;
      prev = std::move(next);
    }
  }

  SUBCASE("continuation into the flat cylinder is degenerate") {
    const WarpedMetric g1 = WarpedMetric(ProfileExpr::parse("x^2+1"),
                                         FiberModel::circle(2.0 * M_PI), Window{});
    const WarpedMetric flat = WarpedMetric(ProfileExpr::parse("1"),
                                           FiberModel::circle(2.0 * M_PI), Window{});
    const CensusReport rep = enumerate_strings(g1, HomotopyClass{1}, CensusOptions{64, 9, 0.0, {}});
    REQUIRE(rep.strings.size() == 1);
    const SolveOutcome out = continue_string(g1, flat, rep.strings[0], SolverOptions{});
    CHECK(out.status == SolveStatus::Degenerate);
  }
}

TEST_CASE("constant family: no events, constant F, zero distances") {
  const FamilyReport rep =
      run_family(path_of("x^2+1", linear_samples(11)), HomotopyClass{1}, fast_options());
  CHECK(rep.events.empty());
  REQUIRE(rep.records.size() == 11);
  for (const SampleRecord& r : rep.records) {
    CHECK(r.constructed);
    CHECK(r.membership.nonpositive_everywhere);
    CHECK(r.membership.ends_negative);
    REQUIRE(r.census.F.has_value());
    CHECK(*r.census.F == Rational{1, 1});
    if (r.has_distance) {
      CHECK(r.dist_prev == 0.0);
      CHECK_FALSE(r.diverging);
    }
  }
}

TEST_CASE("shifted family: string grows with the shift, distance is the step") {
  const FamilyReport rep =
      run_family(path_of("x^2+1+s", linear_samples(6)), HomotopyClass{1}, fast_options());
  CHECK(rep.events.empty());
  for (const SampleRecord& r : rep.records) {
    REQUIRE(r.census.F.has_value());
    CHECK(*r.census.F == Rational{1, 1});
    REQUIRE(r.census.strings.size() == 1);
    CHECK(std::abs(r.census.strings[0].base_x) <= 1e-6);
    CHECK(std::abs(r.census.strings[0].length - 2.0 * M_PI * (1.0 + r.s)) <= 1e-5);
    if (r.has_distance) CHECK(r.dist_prev == doctest::Approx(0.2).epsilon(1e-9));
  }

  // F-constancy on an event-free sweep, stated as exact rational equality
  for (std::size_t i = 1; i < rep.records.size(); ++i)
    CHECK(*rep.records[i].census.F == *rep.records[i - 1].census.F);
}

TEST_CASE("positivity violation becomes a per-slice event") {
  const FamilyReport rep =
      run_family(path_of("x^2+1-2*s", linear_samples(5)), HomotopyClass{1}, fast_options());
  // slices at s = 0.5, 0.75, 1 are not metrics
  int failed = 0;
  for (const SampleRecord& r : rep.records)
    if (!r.constructed) ++failed;
  CHECK(failed == 3);
  int exit_events = 0;
  for (const FamilyEvent& e : rep.events)
    if (e.kind == EventKind::MembershipExit) ++exit_events;
  CHECK(exit_events == 3);
}

TEST_CASE("interpolation family: membership holds, uniformity fails, escape at s=0") {
  const FamilyReport rep =
      run_family(path_of(kInterpolation, linear_samples(11)), HomotopyClass{1}, fast_options());
  REQUIRE(rep.records.size() == 11);

  for (const SampleRecord& r : rep.records) {
    CHECK(r.constructed);
    CHECK(r.membership.nonpositive_everywhere);
    CHECK(r.membership.ends_negative);
  }

  // F = 0 at s = 0 (no strings), F = 1 wherever the string exists
  REQUIRE(rep.records[0].census.F.has_value());
  CHECK(*rep.records[0].census.F == Rational{0, 1});
  CHECK(rep.records[0].census.strings.empty());
  CHECK(rep.records[0].census.any_escape());
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    REQUIRE(rep.records[i].census.F.has_value());
    CHECK(*rep.records[i].census.F == Rational{1, 1});
    CHECK(std::abs(rep.records[i].census.strings.at(0).base_x - root_oracle(rep.records[i].s)) <=
          1e-4);
  }

  bool has_escape = false, has_uniform = false;
  for (const FamilyEvent& e : rep.events) {
    if (e.kind == EventKind::Escape) has_escape = true;
    if (e.kind == EventKind::UniformDiscontinuity) has_uniform = true;
  }
  CHECK(has_escape);
  CHECK(has_uniform);

  // the jump mechanism: an F jump never happens on a clean sweep
  bool clean = rep.events.empty();
  bool f_jump = !(*rep.records.front().census.F == *rep.records.back().census.F);
  CHECK((f_jump ? !clean : true));
}

TEST_CASE("family reports are byte-identical across runs") {
  RunConfig cfg;
  cfg.profile_text = kInterpolation;
  cfg.is_family = true;
  cfg.family_samples = linear_samples(6);
  cfg.census.n_points = 64;
  cfg.census.starts = 9;

  const MetricPath path = path_of(kInterpolation, cfg.family_samples);
  const FamilyReport a = run_family(path, HomotopyClass{1}, fast_options());
  const FamilyReport b = run_family(path, HomotopyClass{1}, fast_options());
  CHECK(family_report_json(cfg, a) == family_report_json(cfg, b));
  CHECK(family_series_csv(a) == family_series_csv(b));

  const std::string csv = family_series_csv(a);
  CHECK(csv.rfind("s,F_num,F_den,x0,length,dist_prev,diverging,events\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
}
