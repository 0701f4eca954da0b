#include "warpstring/census.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "warpstring/inertia.hpp"

namespace warpstring {

bool CensusReport::any_escape() const {
  for (const StartRecord& r : starts)
    if (r.status == SolveStatus::Escaped) return true;
  return false;
}

std::vector<double> profile_critical_points(const WarpedMetric& g) {
  const double hw = g.window().half_width;
  const int grid_n = std::max(g.window().grid_n, 801);

  std::vector<double> xs(static_cast<std::size_t>(grid_n));
  std::vector<double> vals(static_cast<std::size_t>(grid_n));
  bool all_zero = true;
  for (int i = 0; i < grid_n; ++i) {
    xs[static_cast<std::size_t>(i)] = -hw + 2.0 * hw * i / (grid_n - 1);
    vals[static_cast<std::size_t>(i)] = g.df(xs[static_cast<std::size_t>(i)]);
    if (vals[static_cast<std::size_t>(i)] != 0.0) all_zero = false;
  }
  if (all_zero) return {};  // no isolated critical points

  auto polish = [&](double x) {
    for (int it = 0; it < 6; ++it) {
      const double fp = g.df(x);
      const double fpp = g.d2f(x);
      if (std::abs(fpp) < 1e-14) break;
      const double next = x - fp / fpp;
      if (!std::isfinite(next) || std::abs(next) > hw * 1.5) break;
      x = next;
    }
    return x;
  };

  std::vector<double> roots;
  for (int i = 0; i < grid_n; ++i) {
    if (vals[static_cast<std::size_t>(i)] == 0.0) {
      roots.push_back(xs[static_cast<std::size_t>(i)]);
      continue;
    }
    if (i + 1 < grid_n && vals[static_cast<std::size_t>(i)] * vals[static_cast<std::size_t>(i + 1)] < 0.0) {
      double lo = xs[static_cast<std::size_t>(i)], hi = xs[static_cast<std::size_t>(i + 1)];
      double flo = vals[static_cast<std::size_t>(i)];
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g.df(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(polish(0.5 * (lo + hi)));
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || std::abs(r - out.back()) > 1e-8 * (1.0 + std::abs(r))) out.push_back(r);
  }
  return out;
}

namespace {

double circ_gap(double a, double b, double ell) { return std::abs(std::remainder(a - b, ell)); }

double point_gap(const DiscreteLoop& a, int i, const DiscreteLoop& b, int j, double ell) {
  const double dx =
      std::abs(a.xs[static_cast<std::size_t>(i)] - b.xs[static_cast<std::size_t>(j)]);
  const double dt =
      circ_gap(a.thetas[static_cast<std::size_t>(i)], b.thetas[static_cast<std::size_t>(j)], ell);
  return std::max(dx, dt);
}

}  // namespace

bool loops_equivalent(const DiscreteLoop& a, const DiscreteLoop& b, double fiber_length,
                      double tol) {
  if (a.n != b.n || a.cls.winding != b.cls.winding) return false;
  const int n = a.n;
  for (int shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (int i = 0; i < n && worst <= tol; ++i) {
      const int j = (i + shift) % n;
      worst = std::max(worst, point_gap(a, i, b, j, fiber_length));
    }
    if (worst <= tol) return true;
  }
  return false;
}

int loop_multiplicity(const DiscreteLoop& loop, double fiber_length, double dedup_tol) {
  const int n = loop.n;
  const int w = std::abs(loop.cls.winding);
  const int gcd = static_cast<int>(std::gcd(n, w));
  for (int d = gcd; d >= 1; --d) {
    if (gcd % d != 0) continue;
    const int shift = n / d;
    double worst = 0.0;
    for (int i = 0; i < n && worst <= dedup_tol; ++i) {
      const int j = (i + shift) % n;
      worst = std::max(worst, point_gap(loop, i, loop, j, fiber_length));
    }
    if (worst <= dedup_tol) return d;
  }
  return 1;
}

IndexResult morse_index(const WarpedMetric& g, const DiscreteLoop& loop,
                        const SolverOptions& raw_opts) {
  validate_loop(loop, g.fiber().length);
  const SolverOptions opts = raw_opts.resolved(loop.n, g.fiber().length, loop.cls.winding);
  const double gn = loop_gradient(g, loop).norm();
  if (gn > opts.switch_grad)
    throw std::invalid_argument("morse_index requires a near-critical loop");
  const Inertia in = matrix_inertia(loop_hessian(g, loop), opts.tol_zero);
  return IndexResult{in.negative, in.zero};
}

int transverse_index(const WarpedMetric& g, const GeodesicString& s) {
  const int m = g.fiber().transverse_dimension;
  if (m == 0) return 0;
  if (!s.circle)
    throw std::invalid_argument("transverse index is only defined at critical circles");
  const double k_perp = g.fiber_plane_curvature(s.base_x);
  if (!(k_perp > 0.0)) return 0;
  int count = 1;  // k = 0
  const double L = s.length;
  for (int k = 1;; ++k) {
    const double lam = (2.0 * M_PI * k / L) * (2.0 * M_PI * k / L);
    if (lam < k_perp)
      count += 2;
    else
      break;
  }
  return m * count;
}

Rational fuller_sum(const std::vector<GeodesicString>& strings) {
  Rational sum{0, 1};
  for (const GeodesicString& s : strings) {
    if (!s.nondegenerate)
      throw std::invalid_argument("invariant undefined: degenerate string present");
    if (!s.transverse_index)
      throw std::invalid_argument("invariant undefined: unknown transverse index");
    const int total = s.morse_index + *s.transverse_index;
    const std::int64_t sign = (total % 2 == 0) ? 1 : -1;
    sum = sum + Rational::reduced(sign, s.multiplicity);
  }
  return sum;
}

namespace {

bool trace_monotone_length(const std::vector<TracePoint>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double prev = trace[i - 1].length;
    if (trace[i].length > prev + 1e-12 * (1.0 + prev)) return false;
  }
  return true;
}

double mean_x(const DiscreteLoop& loop) {
  double s = 0.0;
  for (double v : loop.xs) s += v;
  return s / static_cast<double>(loop.n);
}

}  // namespace

CensusReport enumerate_strings(const WarpedMetric& g, HomotopyClass beta,
                               const CensusOptions& copts,
                               const std::vector<DiscreteLoop>& warm_loops) {
  if (beta.winding == 0) throw std::invalid_argument("homotopy class must be non-trivial");
  const double ell = g.fiber().length;
  const int w = std::abs(beta.winding);

  int n = std::max(copts.n_points, 8);
  if (n % w != 0) n += w - n % w;

  CensusReport rep;
  rep.n_used = n;
  if (n != copts.n_points)
    rep.notes.push_back("sample count rounded to " + std::to_string(n) +
                        " (multiple of |winding|)");

  const SolverOptions sopts = copts.solver.resolved(n, ell, beta.winding);
  const double dedup_tol = copts.dedup_tol > 0.0 ? copts.dedup_tol : 1e-5 * ell;
  const double hw = g.window().half_width;
  rep.solver_used = sopts;
  rep.dedup_tol_used = dedup_tol;

  struct Seed {
    std::string kind;
    DiscreteLoop loop;
  };
  std::vector<Seed> seeds;
  for (double r : profile_critical_points(g))
    seeds.push_back({"root-seed", make_circle_loop(g, r, beta, n)});
  const int starts = std::max(copts.starts, 1);
  for (int i = 0; i < starts; ++i) {
    const double x = starts == 1 ? 0.0 : -hw + 2.0 * hw * i / (starts - 1);
    seeds.push_back({"lattice", make_circle_loop(g, x, beta, n)});
  }
  for (const DiscreteLoop& loop : warm_loops) {
    if (loop.n != n || loop.cls.winding != beta.winding) {
      rep.notes.push_back("warm loop skipped: incompatible discretization");
      continue;
    }
    seeds.push_back({"warm", loop});
  }

  std::vector<DiscreteLoop> candidates;
  for (const Seed& seed : seeds) {
    SolveOutcome outcome;
    if (seed.kind == "warm") {
      try {
        outcome = refine_newton(g, seed.loop, sopts);
        if (outcome.status == SolveStatus::MaxIter) outcome = minimize(g, seed.loop, sopts);
      } catch (const std::invalid_argument&) {
        outcome = minimize(g, seed.loop, sopts);
      }
    } else {
      outcome = minimize(g, seed.loop, sopts);
    }

    StartRecord rec;
    rec.kind = seed.kind;
    rec.start_x = mean_x(seed.loop);
    rec.status = outcome.status;
    rec.iterations = outcome.iterations;
    rec.final_length = outcome.length;
    rec.final_grad = outcome.grad_norm;
    rec.final_min_x = outcome.loop.xs.empty()
                          ? 0.0
                          : *std::min_element(outcome.loop.xs.begin(), outcome.loop.xs.end());
    rec.monotone_length = trace_monotone_length(outcome.trace);
    rep.starts.push_back(rec);

    switch (outcome.status) {
      case SolveStatus::Converged:
        candidates.push_back(std::move(outcome.loop));
        break;
      case SolveStatus::Degenerate:
        // Near-critical but with excess nullity; keep it so the report can
        // show why F is undefined.
        if (outcome.grad_norm <= sopts.switch_grad) candidates.push_back(std::move(outcome.loop));
        rep.regular = false;
        rep.notes.push_back("degenerate outcome from " + seed.kind + " start");
        break;
      case SolveStatus::Escaped:
        break;
      case SolveStatus::MaxIter:
        rep.notes.push_back("solver hit the iteration budget from a " + seed.kind +
                            " start: " + outcome.note);
        break;
    }
  }

  std::vector<DiscreteLoop> distinct;
  for (const DiscreteLoop& c : candidates) {
    bool duplicate = false;
    for (const DiscreteLoop& d : distinct) {
      if (loops_equivalent(c, d, ell, dedup_tol)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    distinct.push_back(c);
  }
  rep.notes.push_back(std::to_string(candidates.size()) + " converged starts reduced to " +
                      std::to_string(distinct.size()) + " distinct strings");

  for (const DiscreteLoop& loop : distinct) {
    GeodesicString s;
    s.representative = loop;
    s.length = loop_length(g, loop);
    s.base_x = mean_x(loop);

    const IndexResult idx = morse_index(g, loop, sopts);
    s.morse_index = idx.morse_index;
    s.nullity = std::max(idx.nullity, 1);
    s.nondegenerate = s.nullity == 1;

    s.multiplicity = loop_multiplicity(loop, ell, dedup_tol);

    double spread = 0.0;
    for (double v : loop.xs) spread = std::max(spread, std::abs(v - s.base_x));
    bool critical = false;
    try {
      critical = std::abs(g.df(s.base_x)) <= 1e-6 * (1.0 + std::abs(g.d2f(s.base_x)));
    } catch (const DomainError&) {
      critical = false;
    }
    s.circle = spread <= 1e-6 * (1.0 + std::abs(s.base_x)) && critical;

    if (g.fiber().transverse_dimension == 0) {
      s.transverse_index = 0;
    } else if (s.circle) {
      try {
        s.transverse_index = transverse_index(g, s);
      } catch (const DomainError&) {
        s.transverse_index = std::nullopt;
      }
    } else {
      s.transverse_index = std::nullopt;
    }

    if (!s.nondegenerate || !s.transverse_index) rep.regular = false;
    if (!s.transverse_index)
      rep.notes.push_back("transverse index unknown for a non-circle string");

    rep.strings.push_back(std::move(s));
  }

  std::sort(rep.strings.begin(), rep.strings.end(),
            [](const GeodesicString& a, const GeodesicString& b) {
              if (a.base_x != b.base_x) return a.base_x < b.base_x;
              return a.length < b.length;
            });

  if (rep.regular) rep.F = fuller_sum(rep.strings);
  return rep;
}

}  // namespace warpstring
