// Acceptance suite: runs every headline requirement end to end and prints
// one pass/fail line per criterion. Always-on checks, never compiled out.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "warpstring/commands.hpp"
#include "warpstring/family.hpp"
#include "warpstring/report.hpp"

using namespace warpstring;

namespace {

int g_failures = 0;
bool g_criterion_ok = true;

#define REQUIRE_C(cond, msg)                                                          \
  do {                                                                                \
    if (!(cond)) {                                                                    \
      std::ostringstream oss_;                                                        \
      oss_ << msg;                                                                    \
      std::cerr << "  [check failed] " << __FILE__ << ":" << __LINE__ << "  "         \
                << oss_.str() << "\n";                                                \
      g_criterion_ok = false;                                                         \
    }                                                                                 \
  } while (0)

void report_criterion(int number, const std::string& label, bool verbose) {
  if (!g_criterion_ok) ++g_failures;
  if (verbose || !g_criterion_ok)
    std::cout << (g_criterion_ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": "
              << label << "\n";
  g_criterion_ok = true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double dt) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", dt);
  return buf;
}

constexpr double kTwoPi = 2.0 * M_PI;

WarpedMetric metric(const char* profile) {
  return WarpedMetric(ProfileExpr::parse(profile), FiberModel::circle(kTwoPi), Window{});
}

RunConfig census_config(const char* profile, int n_points, int winding) {
  RunConfig cfg;
  cfg.profile_text = profile;
  cfg.cls.winding = winding;
  cfg.census.n_points = n_points;
  return cfg;
}

// slice critical point of the interpolation family, independent root finder
double interp_root(double s) {
  return oracles::find_root([&](double x) { return (1.0 - s) * std::exp(x) + 2.0 * s * x; },
                            [&](double x) { return (1.0 - s) * std::exp(x) + 2.0 * s; },
                            -14.0, 2.0);
}

// --- criterion 1: the single waist string of f = x^2 + 1 ------------------

void criterion_1(bool verbose, std::string& digest) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = census_config("x^2+1", 256, 1);
  const WarpedMetric g = metric("x^2+1");
  const CensusReport rep = enumerate_strings(g, cfg.cls, cfg.census);

  REQUIRE_C(rep.strings.size() == 1, "expected exactly one string, got " << rep.strings.size());
  if (rep.strings.size() == 1) {
    const GeodesicString& s = rep.strings[0];
    REQUIRE_C(std::abs(s.base_x) <= 1e-6, "x0 = " << s.base_x);
    REQUIRE_C(std::abs(s.length - kTwoPi) <= 1e-3, "length = " << s.length);
    REQUIRE_C(s.morse_index == 0, "index = " << s.morse_index);
    REQUIRE_C(s.nullity == 1, "nullity = " << s.nullity);
    REQUIRE_C(s.multiplicity == 1, "multiplicity = " << s.multiplicity);
  }
  REQUIRE_C(rep.regular, "census not regular");
  REQUIRE_C(rep.F.has_value() && *rep.F == (Rational{1, 1}), "F != 1/1");

  digest += census_report_json(cfg, rep);
  const double dt = seconds_since(t0);
  if (verbose) {
    REQUIRE_C(dt < 10.0, "runtime " << dt << " s exceeds 10 s");
    report_criterion(1, "F = 1 census on the parabolic profile (" + fmt_seconds(dt) + ")",
                     verbose);
  }
}

// --- criterion 2: the exponential profile has no strings ------------------

void criterion_2(bool verbose, std::string& digest) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = census_config("exp(x)", 256, 1);
  const WarpedMetric g = metric("exp(x)");
  const CensusReport rep = enumerate_strings(g, cfg.cls, cfg.census);
  const double eps_len = 1e-4 * kTwoPi;

  REQUIRE_C(rep.strings.empty(), "expected no strings, got " << rep.strings.size());
  REQUIRE_C(rep.F.has_value() && *rep.F == (Rational{0, 1}), "F != 0/1");
  REQUIRE_C(!rep.starts.empty(), "no starts recorded");
  for (const StartRecord& r : rep.starts) {
    REQUIRE_C(r.status == SolveStatus::Escaped,
              "start at " << r.start_x << " ended " << to_string(r.status));
    REQUIRE_C(r.monotone_length, "non-monotone length from start " << r.start_x);
    REQUIRE_C(r.final_length < eps_len,
              "final length " << r.final_length << " not below " << eps_len);
  }

  digest += census_report_json(cfg, rep);
  const double dt = seconds_since(t0);
  if (verbose) {
    REQUIRE_C(dt < 30.0, "runtime " << dt << " s exceeds 30 s");
    report_criterion(2, "F = 0 census on the exponential profile (" + fmt_seconds(dt) + ")",
                     verbose);
  }
}

// --- criterion 3: curvature closed forms and membership -------------------

void criterion_3(bool verbose, std::string& digest) {
  const WarpedMetric g0 = metric("exp(x)");
  const WarpedMetric g1 = metric("x^2+1");

  for (int i = 0; i < 1001; ++i) {
    const double x = -6.0 + 12.0 * i / 1000.0;
    REQUIRE_C(std::abs(g0.base_curvature(x) - (-1.0)) <= 1e-9,
              "exp profile curvature off at x = " << x);
    const double want = -2.0 / (x * x + 1.0);
    REQUIRE_C(std::abs(g1.base_curvature(x) - want) <= 1e-9,
              "parabolic curvature off at x = " << x);
  }

  for (const WarpedMetric* g : {&g0, &g1}) {
    const MembershipVerdict v = g->membership(1001);
    REQUIRE_C(v.nonpositive_everywhere, "non-positivity check failed");
    REQUIRE_C(v.ends_negative, "ends check failed");
  }

  digest += curvature_series_csv(curvature_series(g0, 101));
  digest += curvature_series_csv(curvature_series(g1, 101));
  if (verbose) report_criterion(3, "curvature oracles and membership", verbose);
}

// --- criterion 4: cover law F(g1, k beta) = 1/k ----------------------------

void criterion_4(bool verbose, std::string& digest) {
  const WarpedMetric g = metric("x^2+1");
  for (int k : {1, 2, 3}) {
    CensusOptions opts;
    opts.n_points = 256;
    const CensusReport rep = enumerate_strings(g, HomotopyClass{k}, opts);
    REQUIRE_C(rep.strings.size() == 1, "k = " << k << ": " << rep.strings.size() << " strings");
    if (rep.strings.size() == 1) {
      REQUIRE_C(rep.strings[0].multiplicity == k,
                "k = " << k << ": multiplicity " << rep.strings[0].multiplicity);
      REQUIRE_C(rep.strings[0].morse_index == 0,
                "k = " << k << ": index " << rep.strings[0].morse_index);
    }
    REQUIRE_C(rep.F.has_value() && *rep.F == (Rational{1, k}),
              "k = " << k << ": F is not 1/" << k);
    if (rep.F) digest += "F(k=" + std::to_string(k) + ")=" + rep.F->str() + "\n";
  }
  if (verbose) report_criterion(4, "cover law F = 1/k for k = 1, 2, 3", verbose);
}

// --- criterion 5: discrete Morse index against the periodic spectrum ------

void criterion_5(bool verbose, std::string& digest) {
  const WarpedMetric g = metric("(x^2-1)^2+1/2");
  // K = 8/3 at the x = 0 circle, L = 3 pi
  const int expected = oracles::periodic_spectrum_count(3.0 * M_PI, 8.0 / 3.0);
  for (int n : {128, 256}) {
    const IndexResult r = morse_index(g, make_circle_loop(g, 0.0, HomotopyClass{1}, n));
    REQUIRE_C(r.morse_index == expected,
              "n = " << n << ": discrete count " << r.morse_index << " != " << expected);
    digest += "saddle_index(n=" + std::to_string(n) + ")=" + std::to_string(r.morse_index) + "\n";
  }
  for (double x0 : {-1.0, 1.0}) {
    const IndexResult r = morse_index(g, make_circle_loop(g, x0, HomotopyClass{1}, 128));
    REQUIRE_C(r.morse_index == 0, "well at " << x0 << " has index " << r.morse_index);
    REQUIRE_C(r.nullity == 1, "well at " << x0 << " has nullity " << r.nullity);
  }
  if (verbose)
    report_criterion(5, "Morse index oracle (count " + std::to_string(expected) + ")", verbose);
}

// --- criterion 6: derivative and Hessian correctness -----------------------

void criterion_6(bool verbose, std::string& digest) {
  std::mt19937 rng(20240817);
  for (const char* profile : {"exp(x)", "x^2+1", "(x^2-1)^2+1/2"}) {
    const WarpedMetric g = metric(profile);
    double worst_grad = 0.0, worst_hess = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const DiscreteLoop loop = oracles::random_loop(g, HomotopyClass{1}, 48, rng);
      worst_grad = std::max(worst_grad, oracles::fd_energy_gradient_gap(g, loop, 1e-5));
      worst_hess = std::max(worst_hess, oracles::fd_hessian_gap(g, loop, 1e-5));
    }
    REQUIRE_C(worst_grad <= 1e-6, profile << ": gradient gap " << worst_grad);
    REQUIRE_C(worst_hess <= 1e-5, profile << ": hessian gap " << worst_hess);
    digest += std::string(profile) + " grad_gap=" + format_double(worst_grad) +
              " hess_gap=" + format_double(worst_hess) + "\n";
  }
  if (verbose)
    report_criterion(6, "gradient/Hessian vs finite differences (100 loops x 3 metrics)",
                     verbose);
}

// --- criterion 7: the family mechanism -------------------------------------

std::vector<double> family_samples() {
  // s = 0, then a geometric ladder from 0.002 up to exactly 1
  const int rungs = 40;
  std::vector<double> s;
  s.push_back(0.0);
  for (int i = 0; i < rungs; ++i)
    s.push_back(0.002 * std::pow(500.0, static_cast<double>(i) / (rungs - 1)));
  s.back() = 1.0;
  return s;
}

void criterion_7(bool verbose, std::string& digest) {
  RunConfig cfg;
  cfg.profile_text = "(1-s)*exp(x)+s*(x^2+1)";
  cfg.is_family = true;
  cfg.family_samples = family_samples();
  cfg.census.n_points = 96;

  const MetricPath path(ProfileExpr::parse(cfg.profile_text), cfg.fiber, cfg.window,
                        cfg.family_samples);
  FamilyOptions opts;
  opts.census = cfg.census;
  const FamilyReport rep = run_family(path, cfg.cls, opts);
  const double eps_len = 1e-4 * kTwoPi;

  // (a) membership holds at every slice
  for (const SampleRecord& r : rep.records) {
    REQUIRE_C(r.constructed, "slice s = " << r.s << " failed to construct");
    REQUIRE_C(r.membership.nonpositive_everywhere && r.membership.ends_negative,
              "membership failed at s = " << r.s);
  }

  // (b) uniform distances between small-s slices carry the diverging flag
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    if (rep.records[i].s <= 0.05)
      REQUIRE_C(rep.records[i].diverging, "no diverging flag into s = " << rep.records[i].s);
  }

  // (c) string position tracks the independent root oracle
  // (d) lengths decrease toward small s, collapsing at the smallest slice
  // (e) F = 1 wherever defined and F = 0 at s = 0
  double prev_length = 0.0;
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    const SampleRecord& r = rep.records[i];
    REQUIRE_C(r.census.strings.size() == 1, "s = " << r.s << ": no unique string");
    if (r.census.strings.size() != 1) continue;
    const GeodesicString& s = r.census.strings[0];
    REQUIRE_C(std::abs(s.base_x - interp_root(r.s)) <= 1e-4,
              "s = " << r.s << ": x0 " << s.base_x << " vs oracle " << interp_root(r.s));
    REQUIRE_C(s.length > prev_length, "length not increasing with s at s = " << r.s);
    prev_length = s.length;
    REQUIRE_C(r.census.F.has_value() && *r.census.F == (Rational{1, 1}),
              "F != 1 at s = " << r.s);
  }

  const SampleRecord& at_zero = rep.records.front();
  REQUIRE_C(at_zero.census.strings.empty(), "unexpected string at s = 0");
  REQUIRE_C(at_zero.census.F.has_value() && *at_zero.census.F == (Rational{0, 1}),
            "F != 0 at s = 0");
  REQUIRE_C(at_zero.census.any_escape(), "no escape recorded at s = 0");
  for (const StartRecord& sr : at_zero.census.starts) {
    REQUIRE_C(sr.status == SolveStatus::Escaped, "start did not escape at s = 0");
    REQUIRE_C(sr.final_length < eps_len && sr.final_length < 0.1,
              "escape length " << sr.final_length << " not collapsed at s = 0");
  }

  // never a clean constant-F run from F = 0 to F = 1
  bool has_escape = false, has_uniform = false;
  for (const FamilyEvent& e : rep.events) {
    if (e.kind == EventKind::Escape) has_escape = true;
    if (e.kind == EventKind::UniformDiscontinuity) has_uniform = true;
  }
  REQUIRE_C(has_escape, "no escape event detected");
  REQUIRE_C(has_uniform, "no uniform-discontinuity event detected");

  digest += family_report_json(cfg, rep);
  digest += family_series_csv(rep);
  if (verbose)
    report_criterion(7, "family sweep: membership holds, uniformity fails, no clean F jump",
                     verbose);
}

std::string run_criteria(bool verbose) {
  std::string digest;
  criterion_1(verbose, digest);
  criterion_2(verbose, digest);
  criterion_3(verbose, digest);
  criterion_4(verbose, digest);
  criterion_5(verbose, digest);
  criterion_6(verbose, digest);
  criterion_7(verbose, digest);
  return digest;
}

}  // namespace

int main() {
  const std::string first = run_criteria(true);

  // criterion 8: everything above reproduces byte-identically
  const std::string second = run_criteria(false);
  REQUIRE_C(first == second, "reports differ between runs");
  REQUIRE_C(!first.empty(), "empty digest");
  report_criterion(8, "byte-identical reports across repeated runs", true);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
