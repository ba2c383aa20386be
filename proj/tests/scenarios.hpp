#pragma once

#include <algorithm>
#include <cmath>

#include "sharpwave/solver.hpp"
#include "support.hpp"

namespace sharpwave::testing {

struct ZkbRun {
  double worst_rel = 0.0;  // max over recorded t in [1, 2] of |b - exact| / exact
  double mass_drift = 0.0;
};

inline double mass(const Field& f, double m) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += density_from_pressure(f.v[i], m) * (i == 0 ? 0.5 : 1.0);
  return s * f.dx;
}

inline ZkbRun run_zkb(double m, double dx) {
  const Environment env = reaction_free(m);
  const double C = 1.0;
  const double r1 = zkb_front(m, C, 1.0);
  Field f = init_step([&](double x) { return pressure_from_density(zkb_density(m, C, x, 1.0), m); }, r1, 0.0, r1 + 3.0,
                      dx);
  f.t = 1.0;
  SolverConfig cfg;
  cfg.dx = dx;
  cfg.left = LeftBoundary::reflect;
  cfg.startup_steps = 0;
  StopCondition until;
  until.t_end = 2.0;
  const double m0 = mass(f, m);
  const SolveResult r = solve(env, f, until, cfg);
  ZkbRun out;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    const double exact = zkb_front(m, C, r.trajectory.t[i]);
    out.worst_rel = std::max(out.worst_rel, std::abs(r.trajectory.b[i] - exact) / exact);
  }
  out.mass_drift = std::abs(mass(r.field, m) - m0) / m0;
  return out;
}

// Largest u - u_bar over snapshots every 0.1 of a reflected run started from u_bar(., 0).
inline double supersolution_excess(const Environment& env, const SupersolutionParams& p, double dx, double t_end) {
  const double m = env.m();
  const double rho0 = supersolution_radius(p, m, 0.0);
  Field f = init_step([&](double x) { return pressure_from_density(barenblatt_supersolution(p, m, x, 0.0), m); }, rho0,
                      p.x0, p.x0 + rho0 + 1.5, dx);
  SolverConfig cfg;
  cfg.dx = dx;
  cfg.left = LeftBoundary::reflect;
  RecorderSpec rec;
  rec.snapshot_interval = 0.1;
  StopCondition until;
  until.t_end = t_end;
  const SolveResult r = solve(env, f, until, cfg, rec);
  double worst = -1.0;
  for (const Snapshot& s : r.snapshots)
    for (std::size_t i = 0; i < s.v.size(); ++i)
      worst = std::max(worst, density_from_pressure(s.v[i], m) - barenblatt_supersolution(p, m, s.x(i), s.t));
  return worst;
}

}  // namespace sharpwave::testing
