#include "warpstring/loop_solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "warpstring/inertia.hpp"

namespace warpstring {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::Escaped:
      return "escaped";
    case SolveStatus::Degenerate:
      return "degenerate";
    case SolveStatus::MaxIter:
      return "max_iter";
  }
  return "unknown";
}

DiscreteLoop make_circle_loop(const WarpedMetric& g, double x0, HomotopyClass beta, int n) {
  if (beta.winding == 0) throw std::invalid_argument("winding must be nonzero");
  if (n < 8) throw std::invalid_argument("loop needs at least 8 samples");
  DiscreteLoop loop;
  loop.n = n;
  loop.cls = beta;
  loop.closure = beta.winding * g.fiber().length;
  loop.xs.assign(static_cast<std::size_t>(n), x0);
  loop.thetas.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) loop.thetas[static_cast<std::size_t>(j)] = loop.closure * j / n;
  return loop;
}

void validate_loop(const DiscreteLoop& loop, double fiber_length) {
  if (loop.n < 8) throw std::invalid_argument("loop needs at least 8 samples");
  if (loop.cls.winding == 0) throw std::invalid_argument("winding must be nonzero");
  if (loop.xs.size() != static_cast<std::size_t>(loop.n) ||
      loop.thetas.size() != static_cast<std::size_t>(loop.n))
    throw std::invalid_argument("loop coordinate arrays must have n entries");
  if (loop.closure != loop.cls.winding * fiber_length)
    throw std::invalid_argument("stored closure offset disagrees with winding * fiber length");
  for (double v : loop.xs)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite base coordinate");
  for (double v : loop.thetas)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite fiber coordinate");
}

DiscreteLoop rotate_loop(const DiscreteLoop& loop, int j) {
  const int n = loop.n;
  j = ((j % n) + n) % n;
  DiscreteLoop out = loop;
  for (int i = 0; i < n; ++i) {
    const int k = i + j;
    if (k < n) {
      out.xs[static_cast<std::size_t>(i)] = loop.xs[static_cast<std::size_t>(k)];
      out.thetas[static_cast<std::size_t>(i)] = loop.thetas[static_cast<std::size_t>(k)];
    } else {
      out.xs[static_cast<std::size_t>(i)] = loop.xs[static_cast<std::size_t>(k - n)];
      out.thetas[static_cast<std::size_t>(i)] =
          loop.thetas[static_cast<std::size_t>(k - n)] + loop.closure;
    }
  }
  return out;
}

namespace {

struct Segment {
  double dx, dth, mid;
};

inline Segment segment(const DiscreteLoop& loop, int i) {
  const int n = loop.n;
  const int ip = (i + 1 == n) ? 0 : i + 1;
  const double wrap = (i + 1 == n) ? loop.closure : 0.0;
  Segment s;
  s.dx = loop.xs[static_cast<std::size_t>(ip)] - loop.xs[static_cast<std::size_t>(i)];
  s.dth = loop.thetas[static_cast<std::size_t>(ip)] + wrap - loop.thetas[static_cast<std::size_t>(i)];
  s.mid = 0.5 * (loop.xs[static_cast<std::size_t>(i)] + loop.xs[static_cast<std::size_t>(ip)]);
  return s;
}

}  // namespace

double loop_energy(const WarpedMetric& g, const DiscreteLoop& loop) {
  const int n = loop.n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Segment s = segment(loop, i);
    const double F = g.f(s.mid);
    sum += s.dx * s.dx + F * F * s.dth * s.dth;
  }
  return 0.5 * n * sum;
}

double loop_length(const WarpedMetric& g, const DiscreteLoop& loop) {
  const int n = loop.n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Segment s = segment(loop, i);
    const double F = g.f(s.mid);
    sum += std::sqrt(s.dx * s.dx + F * F * s.dth * s.dth);
  }
  return sum;
}

Eigen::VectorXd loop_gradient(const WarpedMetric& g, const DiscreteLoop& loop) {
  const int n = loop.n;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    const Segment s = segment(loop, i);
    const double F = g.f(s.mid);
    const double Q = F * g.df(s.mid);  // d(F^2)/dmid / 2
    const double S = F * F;
    grad[i] += 0.5 * n * (-2.0 * s.dx + Q * s.dth * s.dth);
    grad[ip] += 0.5 * n * (2.0 * s.dx + Q * s.dth * s.dth);
    grad[n + i] += -n * S * s.dth;
    grad[n + ip] += n * S * s.dth;
  }
  return grad;
}

std::vector<MatrixEntry> loop_hessian_entries(const WarpedMetric& g, const DiscreteLoop& loop) {
  const int n = loop.n;
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(16 * n));
  auto sym = [&entries](int r, int c, double v) {
    entries.push_back({r, c, v});
    if (r != c) entries.push_back({c, r, v});
  };
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    const Segment s = segment(loop, i);
    const double F = g.f(s.mid);
    const double dF = g.df(s.mid);
    const double d2F = g.d2f(s.mid);
    const double Q = F * dF;
    const double P = dF * dF + F * d2F;
    const double S = F * F;

    const double diag_x = n + 0.25 * n * P * s.dth * s.dth;
    const double off_x = -n + 0.25 * n * P * s.dth * s.dth;
    sym(i, i, diag_x);
    sym(ip, ip, diag_x);
    sym(i, ip, off_x);

    const double cross = n * Q * s.dth;
    sym(i, n + i, -cross);
    sym(i, n + ip, cross);
    sym(ip, n + i, -cross);
    sym(ip, n + ip, cross);

    sym(n + i, n + i, n * S);
    sym(n + ip, n + ip, n * S);
    sym(n + i, n + ip, -n * S);
  }
  return entries;
}

Eigen::MatrixXd loop_hessian(const WarpedMetric& g, const DiscreteLoop& loop) {
  const int n = loop.n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (const MatrixEntry& e : loop_hessian_entries(g, loop)) H(e.row, e.col) += e.value;
  return H;
}

Eigen::VectorXd rotation_mode(const DiscreteLoop& loop) {
  const int n = loop.n;
  Eigen::VectorXd u(2 * n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1 == n) ? 0 : j + 1;
    const int jm = (j == 0) ? n - 1 : j - 1;
    const double th_p =
        loop.thetas[static_cast<std::size_t>(jp)] + ((j + 1 == n) ? loop.closure : 0.0);
    const double th_m =
        loop.thetas[static_cast<std::size_t>(jm)] - ((j == 0) ? loop.closure : 0.0);
    u[j] = 0.5 * (loop.xs[static_cast<std::size_t>(jp)] - loop.xs[static_cast<std::size_t>(jm)]);
    u[n + j] = 0.5 * (th_p - th_m);
  }
  const double norm = u.norm();
  if (norm < 1e-300) throw std::invalid_argument("loop has no reparametrization direction");
  return u / norm;
}

SolverOptions SolverOptions::resolved(int n, double fiber_length, int winding) const {
  SolverOptions r = *this;
  if (r.tol_grad <= 0.0) r.tol_grad = 1e-12 * n;
  if (r.switch_grad <= 0.0) r.switch_grad = 1e-2 * n;
  if (r.tol_zero <= 0.0) r.tol_zero = 1e-8 * n;
  if (r.eps_len <= 0.0) r.eps_len = 1e-4 * fiber_length * std::abs(winding);
  if (r.max_iter <= 0) r.max_iter = 20000;
  if (r.max_newton <= 0) r.max_newton = 80;
  if (r.checkpoint_interval <= 0) r.checkpoint_interval = 100;
  return r;
}

namespace {

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double t : v) s += t;
  return s / static_cast<double>(v.size());
}

void apply_step(DiscreteLoop& loop, const Eigen::VectorXd& dir, double scale) {
  const int n = loop.n;
  for (int j = 0; j < n; ++j) {
    loop.xs[static_cast<std::size_t>(j)] += scale * dir[j];
    loop.thetas[static_cast<std::size_t>(j)] += scale * dir[n + j];
  }
}

// Newton step on the bordered system [[H, u],[u^T, 0]]; pinning the rotation
// mode keeps the system regular at non-degenerate strings of any index.
struct NewtonStep {
  bool ok = false;
  bool singular = false;
  Eigen::VectorXd delta;
};

NewtonStep bordered_newton_step(const WarpedMetric& g, const DiscreteLoop& loop,
                                const Eigen::VectorXd& grad) {
  const int n = loop.n;
  const int dim = 2 * n + 1;
  const Eigen::VectorXd u = rotation_mode(loop);

  std::vector<Eigen::Triplet<double>> trip;
  const std::vector<MatrixEntry> entries = loop_hessian_entries(g, loop);
  trip.reserve(entries.size() + 2 * static_cast<std::size_t>(n) + 1);
  for (const MatrixEntry& e : entries) trip.emplace_back(e.row, e.col, e.value);
  for (int j = 0; j < 2 * n; ++j) {
    trip.emplace_back(j, 2 * n, u[j]);
    trip.emplace_back(2 * n, j, u[j]);
  }
  Eigen::SparseMatrix<double> K(dim, dim);
  K.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs.head(2 * n) = -grad;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  NewtonStep out;
  if (lu.info() != Eigen::Success) {
    out.singular = true;
    return out;
  }
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) {
    out.singular = true;
    return out;
  }
  const double resid = (K * sol - rhs).norm();
  if (resid > 1e-6 * (1.0 + rhs.norm())) {
    out.singular = true;
    return out;
  }
  out.ok = true;
  out.delta = sol.head(2 * n);
  return out;
}

bool nullity_exceeds_one(const WarpedMetric& g, const DiscreteLoop& loop, double tol_zero) {
  const Inertia in = matrix_inertia(loop_hessian(g, loop), tol_zero);
  return in.zero > 1;
}

}  // namespace

SolveOutcome refine_newton(const WarpedMetric& g, const DiscreteLoop& start,
                           const SolverOptions& raw_opts) {
  validate_loop(start, g.fiber().length);
  const SolverOptions opts = raw_opts.resolved(start.n, g.fiber().length, start.cls.winding);
  const double window_lo = -g.window().half_width;

  DiscreteLoop loop = start;
  Eigen::VectorXd grad = loop_gradient(g, loop);
  double gn = grad.norm();
  if (gn > opts.switch_grad * (1.0 + 1e-12))
    throw std::invalid_argument("refine_newton requires grad_norm below the switch threshold");

  SolveOutcome out;
  out.loop = loop;
  bool contracted = gn <= opts.tol_grad;
  double prev_gn = gn;
  int grow_streak = 0;

  for (int k = 0; k <= opts.max_newton; ++k) {
    const double len = loop_length(g, loop);
    out.trace.push_back({len, min_of(loop.xs), max_of(loop.xs)});
    out.iterations = k;
    out.loop = loop;
    out.length = len;
    out.grad_norm = gn;

    if (len < opts.eps_len && min_of(loop.xs) < window_lo) {
      out.status = SolveStatus::Escaped;
      out.note = "length collapsed past the window during refinement";
      return out;
    }
    if (gn <= opts.tol_grad) {
      // A consistent singular system can still converge onto a critical
      // manifold; classify by the actual nullity before declaring success.
      if (nullity_exceeds_one(g, loop, opts.tol_zero)) {
        out.status = SolveStatus::Degenerate;
        out.note = "critical point with nullity exceeding the rotation mode";
        return out;
      }
      out.status = contracted ? SolveStatus::Converged : SolveStatus::MaxIter;
      if (!contracted) out.note = "tolerance met without observed contraction";
      return out;
    }
    if (k == opts.max_newton) break;

    const NewtonStep step = bordered_newton_step(g, loop, grad);
    const double coord_scale =
        1.0 + std::max(std::abs(min_of(loop.xs)), std::abs(max_of(loop.xs)));
    if (step.singular || step.delta.lpNorm<Eigen::Infinity>() > 1e4 * coord_scale) {
      if (nullity_exceeds_one(g, loop, opts.tol_zero)) {
        out.status = SolveStatus::Degenerate;
        out.note = "singular second variation: nullity exceeds the rotation mode";
      } else {
        out.status = SolveStatus::MaxIter;
        out.note = "newton system ill-conditioned";
      }
      return out;
    }

    apply_step(loop, step.delta, 1.0);
    grad = loop_gradient(g, loop);
    gn = grad.norm();
    if (gn <= 0.5 * prev_gn) {
      contracted = true;
      grow_streak = 0;
    } else if (gn > 4.0 * prev_gn) {
      if (++grow_streak >= 2) {
        out.status = SolveStatus::MaxIter;
        out.note = "newton iteration diverging";
        out.loop = loop;
        out.grad_norm = gn;
        return out;
      }
    }
    prev_gn = gn;
  }

  out.status = SolveStatus::MaxIter;
  out.note = "newton iteration budget exhausted";
  return out;
}

SolveOutcome minimize(const WarpedMetric& g, DiscreteLoop init, const SolverOptions& raw_opts) {
  validate_loop(init, g.fiber().length);
  const SolverOptions opts = raw_opts.resolved(init.n, g.fiber().length, init.cls.winding);
  const double window_hw = g.window().half_width;
  const double window_lo = -window_hw;

  DiscreteLoop loop = std::move(init);
  SolveOutcome out;
  double step = 1e-2;
  double switch_grad = opts.switch_grad;
  double prev_checkpoint_len = std::numeric_limits<double>::infinity();
  int outside_streak = 0;
  int newton_attempts = 0;

  auto energy_of = [&](const DiscreteLoop& l) {
    try {
      return loop_energy(g, l);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Eigen::VectorXd grad = loop_gradient(g, loop);
    const double gn = grad.norm();
    const double len = loop_length(g, loop);
    out.trace.push_back({len, min_of(loop.xs), max_of(loop.xs)});
    out.iterations = iter;

    if (len < opts.eps_len && min_of(loop.xs) < window_lo) {
      out.status = SolveStatus::Escaped;
      out.loop = loop;
      out.length = len;
      out.grad_norm = gn;
      out.note = "length collapsed past the window";
      return out;
    }
    if (iter % opts.checkpoint_interval == 0) {
      const double mean = mean_of(loop.xs);
      if (std::abs(mean) > window_hw && len < prev_checkpoint_len)
        ++outside_streak;
      else
        outside_streak = std::abs(mean) > window_hw ? 1 : 0;
      prev_checkpoint_len = len;
      if (outside_streak >= 3) {
        out.status = SolveStatus::Escaped;
        out.loop = loop;
        out.length = len;
        out.grad_norm = gn;
        out.note = "loop left the window with decreasing length";
        return out;
      }
    }

    if (gn <= opts.tol_grad) {
      out.status = SolveStatus::Converged;
      out.loop = loop;
      out.length = len;
      out.grad_norm = gn;
      return out;
    }

    if (gn <= switch_grad && newton_attempts < 4) {
      ++newton_attempts;
      SolverOptions refine_opts = opts;
      refine_opts.switch_grad = switch_grad;
      SolveOutcome newton = refine_newton(g, loop, refine_opts);
      out.iterations += newton.iterations;
      out.trace.insert(out.trace.end(), newton.trace.begin(), newton.trace.end());
      if (newton.status != SolveStatus::MaxIter) {
        newton.trace = std::move(out.trace);
        newton.iterations = out.iterations;
        return newton;
      }
      // Newton stalled; resume curve shortening with a tighter switch.
      switch_grad = std::max(0.1 * switch_grad, 10.0 * opts.tol_grad);
      if (newton.grad_norm < gn) loop = newton.loop;
      continue;
    }

    const double e0 = energy_of(loop);
    bool accepted = false;
    bool first_try = true;
    for (int bt = 0; bt < 60; ++bt) {
      DiscreteLoop candidate = loop;
      apply_step(candidate, grad, -step);
      const double e1 = energy_of(candidate);
      if (e1 <= e0 - 1e-4 * step * gn * gn) {
        loop = std::move(candidate);
        accepted = true;
        break;
      }
      step *= 0.5;
      first_try = false;
    }
    if (!accepted) {
      out.status = SolveStatus::MaxIter;
      out.loop = loop;
      out.length = len;
      out.grad_norm = gn;
      out.note = "line search stalled";
      return out;
    }
    if (first_try) step = std::min(step * 2.0, 1e12);
  }

  out.status = SolveStatus::MaxIter;
  out.loop = loop;
  out.length = loop_length(g, loop);
  out.grad_norm = loop_gradient(g, loop).norm();
  out.note = "iteration budget exhausted";
  return out;
}

}  // namespace warpstring
