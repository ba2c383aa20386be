#include "sharpwave/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "sharpwave/error.hpp"
#include "sharpwave/tridiagonal.hpp"

namespace sharpwave {

std::string to_string(SteadyKind kind) {
  switch (kind) {
    case SteadyKind::minimal: return "minimal";
    case SteadyKind::maximal: return "maximal";
    case SteadyKind::other: return "other";
  }
  return "other";
}

namespace {

double periodic_cubic(const std::vector<double>& f, double x) {
  const int n = static_cast<int>(f.size());
  const double s = (x - std::floor(x)) * n;
  int i = static_cast<int>(std::floor(s));
  double t = s - i;
  if (i >= n) {
    i -= n;
  }
  auto at = [&](int k) { return f[static_cast<std::size_t>(((k % n) + n) % n)]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

double PeriodicSteadyState::density_at(double x) const { return periodic_cubic(p, x); }
double PeriodicSteadyState::pressure_at(double x) const { return periodic_cubic(q, x); }
double PeriodicSteadyState::min_density() const { return *std::min_element(p.begin(), p.end()); }
double PeriodicSteadyState::max_density() const { return *std::max_element(p.begin(), p.end()); }

PeriodicSteadyState make_steady_state(const Environment& env, std::vector<double> p, SteadyKind kind) {
  PeriodicSteadyState s;
  s.m = env.m();
  s.kind = kind;
  s.p = std::move(p);
  s.q.resize(s.p.size());
  for (std::size_t i = 0; i < s.p.size(); ++i) s.q[i] = pressure_from_density(s.p[i], s.m);
  s.residual = steady_residual(env, s);
  return s;
}

double steady_residual(const Environment& env, const PeriodicSteadyState& state) {
  const int n = state.size();
  if (n < 3) throw DomainError("steady_residual: need at least 3 samples");
  const double dx = state.dx();
  const double m = env.m();
  std::vector<double> w(state.p.size());
  for (int i = 0; i < n; ++i) w[i] = std::pow(state.p[i], m);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wl = w[(i + n - 1) % n];
    const double wr = w[(i + 1) % n];
    const double x = i * dx;
    const double r = (wr - 2.0 * w[i] + wl) / (dx * dx) + reaction_density(env, x, state.p[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

SteadyMarch march_to_steady(const Environment& env, double initial_density, int direction,
                            SteadyKind kind, const SteadyOptions& opts) {
  if (opts.require_f1) {
    const auto report = validate_F1(env);
    if (!report.pass)
      throw DomainError("steady state search requires the standing hypotheses; clause '" +
                        report.failure()->clause + "' fails");
  }
  const int n = opts.n_period;
  if (n < 8) throw DomainError("n_period must be at least 8");
  const double dx = 1.0 / n;
  const double m = env.m();

  // Backward Euler is order preserving while 1/dt exceeds the largest growth rate.
  double growth = 0.0;
  const double u_hi = std::max(env.kappa_max() + 1.0, initial_density);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    for (int j = 0; j <= 512; ++j) growth = std::max(growth, env.reaction_density_du(x, u_hi * j / 512.0));
  }
  const double dt_cap = growth > 0.0 ? 0.5 / growth : 10.0;

  std::vector<double> u(n, initial_density), u_old(n), delta(n);
  std::vector<double> lower(n), diag(n), upper(n);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = i * dx;

  SteadyMarch out;
  double dt = std::min(0.05, dt_cap);
  double residual = 0.0;
  for (int step = 0; step < opts.max_steps; ++step) {
    u_old = u;
    bool newton_ok = false;
    for (int attempt = 0; attempt < 8 && !newton_ok; ++attempt) {
      u = u_old;
      for (int it = 0; it < 40; ++it) {
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
          const int l = (i + n - 1) % n, r = (i + 1) % n;
          const double wl = std::pow(u[l], m), wc = std::pow(u[i], m), wr = std::pow(u[r], m);
          const double f = (u[i] - u_old[i]) / dt - (wr - 2.0 * wc + wl) / (dx * dx) -
                           reaction_density(env, xs[i], u[i]);
          delta[i] = -f;
          const double dwl = m * std::pow(u[l], m - 1.0);
          const double dwc = m * std::pow(u[i], m - 1.0);
          const double dwr = m * std::pow(u[r], m - 1.0);
          lower[i] = -dwl / (dx * dx);
          upper[i] = -dwr / (dx * dx);
          diag[i] = 1.0 / dt + 2.0 * dwc / (dx * dx) - env.reaction_density_du(xs[i], u[i]);
          scale = std::max(scale, std::abs(u[i]));
        }
        solve_cyclic_tridiagonal(lower, diag, upper, delta);
        double step_norm = 0.0;
        for (int i = 0; i < n; ++i) {
          u[i] += delta[i];
          step_norm = std::max(step_norm, std::abs(delta[i]));
        }
        if (!std::isfinite(step_norm)) break;
        if (step_norm <= 1e-14 * (1.0 + scale)) {
          newton_ok = true;
          break;
        }
      }
      if (!newton_ok) dt *= 0.5;
    }
    if (!newton_ok) throw ConvergenceError("steady march: Newton failed to converge", residual);
    if (*std::min_element(u.begin(), u.end()) <= 0.0)
      throw ConvergenceError("steady march left the positive range", residual);

    for (int i = 0; i < n; ++i)
      out.monotonicity_violation = std::max(out.monotonicity_violation, -direction * (u[i] - u_old[i]));
    out.time += dt;
    out.steps = step + 1;

    PeriodicSteadyState probe;
    probe.p = u;
    residual = steady_residual(env, probe);
    if (residual <= 0.01 * opts.tol) break;
    dt = std::min(dt * 1.5, dt_cap);
  }
  if (residual > opts.tol)
    throw ConvergenceError("steady march did not converge within max_steps", residual);
  out.state = make_steady_state(env, std::move(u), kind);
  return out;
}

PeriodicSteadyState find_min_steady(const Environment& env, const SteadyOptions& opts) {
  const double start = 0.5 * (env.kappa_min() + env.theta());
  return march_to_steady(env, start, +1, SteadyKind::minimal, opts).state;
}

PeriodicSteadyState find_max_steady(const Environment& env, const SteadyOptions& opts) {
  const double start = env.kappa_max() + 1.0;
  return march_to_steady(env, start, -1, SteadyKind::maximal, opts).state;
}

}  // namespace sharpwave
