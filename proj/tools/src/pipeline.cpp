#include <algorithm>
#include <cmath>
#include <future>

#include "sharpwave/error.hpp"
#include "sharpwave_cli/commands.hpp"

namespace sharpwave::cli {

SteadyPair compute_steady_pair(const Environment& env, const SteadyOptions& opts, int jobs) {
  if (jobs > 1) {
    auto lower = std::async(std::launch::async, [&] { return find_min_steady(env, opts); });
    PeriodicSteadyState upper = find_max_steady(env, opts);
    return {lower.get(), std::move(upper)};
  }
  PeriodicSteadyState lower = find_min_steady(env, opts);
  return {std::move(lower), find_max_steady(env, opts)};
}

SolverConfig clamped_solver(const SolverConfig& base, const PeriodicSteadyState& q) {
  SolverConfig s = base;
  s.left = LeftBoundary::dirichlet;
  s.left_value = [q](double x) { return q.pressure_at(x); };
  return s;
}

std::string to_string(WaveStatus s) {
  switch (s) {
    case WaveStatus::converged: return "converged";
    case WaveStatus::no_convergence: return "no convergence";
    case WaveStatus::terrace_suspected: return "terrace suspected";
  }
  return "no convergence";
}

namespace {

bool gaps_settled(const RenormSequence& seq, double tol) {
  const auto& s = seq.s_n;
  if (s.size() < 4) return false;
  for (std::size_t k = s.size() - 3; k < s.size(); ++k)
    if (std::abs(s[k] - s[k - 1]) > tol * s[k]) return false;
  return true;
}

}  // namespace

bool steady_states_coincide(const SteadyPair& s, double tol) {
  if (s.p1.size() != s.p2.size()) return false;
  for (int i = 0; i < s.p1.size(); ++i)
    if (std::abs(s.p1.q[i] - s.p2.q[i]) > tol) return false;
  return true;
}

namespace {

struct Renormalised {
  SolveResult run;
  RenormSequence sequence;
};

Renormalised renormalise_from(const Environment& env, const RunConfig& cfg, const PeriodicSteadyState& q) {
  const RenormConfig& rc = cfg.renorm;
  const SolverConfig solver = clamped_solver(cfg.solver, q);
  Field start = init_heaviside(q, 0.0, -solver.left_margin, 2.0, solver.dx);
  RecorderSpec rec;
  rec.phases_per_unit = rc.phases_per_unit;
  rec.phase_from = static_cast<double>(rc.n_min);
  StopCondition until;
  until.front_station = static_cast<double>(rc.n_max + 1);
  Renormalised out;
  out.run = solve(env, std::move(start), until, solver, rec);
  out.sequence = extract_sequence(out.run, rc);
  return out;
}

}  // namespace

WavePipeline run_wave_pipeline(const RunConfig& cfg) {
  const Environment& env = cfg.env();
  const RenormConfig& rc = cfg.renorm;
  WavePipeline out;
  out.steady = compute_steady_pair(env, cfg.steady, cfg.jobs);
  const bool separate = !steady_states_coincide(out.steady, 10.0 * cfg.steady.tol);

  std::optional<Renormalised> lower;
  Renormalised upper;
  if (separate && cfg.jobs > 1) {
    auto job = std::async(std::launch::async, [&] { return renormalise_from(env, cfg, out.steady.p1); });
    upper = renormalise_from(env, cfg, out.steady.p2);
    lower = job.get();
  } else {
    upper = renormalise_from(env, cfg, out.steady.p2);
    if (separate) lower = renormalise_from(env, cfg, out.steady.p1);
  }
  out.run = std::move(upper.run);
  out.sequence = std::move(upper.sequence);
  if (lower) out.lower_sequence = std::move(lower->sequence);

  try {
    out.wave = extract_wave(out.sequence, rc.tol);
  } catch (const ConvergenceError& e) {
    const bool settled = gaps_settled(out.sequence, rc.tol);
    out.status = settled ? WaveStatus::terrace_suspected : WaveStatus::no_convergence;
    out.message = std::string(e.what()) + (settled ? "; the front period has settled" : "");
    return out;
  }
  out.report = verify_wave(env, *out.wave, {out.steady.p1, out.steady.p2}, cfg.wave.verify);

  if (out.lower_sequence) {
    try {
      const WaveResult lower_wave = extract_wave(*out.lower_sequence, rc.tol);
      out.linfty = check_linfty(*out.lower_sequence, lower_wave, cfg.wave.check_n, cfg.wave.linfty_rel);
    } catch (const ConvergenceError& e) {
      out.status = WaveStatus::terrace_suspected;
      out.message = std::string("the run from p1 did not settle: ") + e.what();
      return out;
    }
  } else {
    out.linfty = check_linfty(out.sequence, *out.wave, cfg.wave.check_n, cfg.wave.linfty_rel);
  }
  if (!out.linfty->pass) {
    out.status = WaveStatus::terrace_suspected;
    out.message = "the window converged but the whole-line gap persists";
    return out;
  }
  out.status = WaveStatus::converged;
  out.pass = out.report->pass;
  out.message = out.pass ? "all verifications passed" : "verification failed";
  return out;
}

DiagnoseResult run_diagnose(const RunConfig& cfg, const SteadyPair& steady) {
  const Environment& env = cfg.env();
  const DiagnoseOptions& d = cfg.diagnose;
  const PeriodicSteadyState& q = steady.p2;
  const double height = d.height;

  const SolverConfig s1 = clamped_solver(cfg.solver, q);
  SolverConfig s2 = cfg.solver;
  s2.left = LeftBoundary::dirichlet;
  s2.left_value = [q, height](double x) { return height * q.pressure_at(x); };

  const double lo = -s1.left_margin;
  Field f1 = init_heaviside(q, 0.0, lo, d.shift + 2.0, s1.dx);
  Field f2 = init_step([&](double x) { return height * q.pressure_at(x); }, d.shift, lo, d.shift + 2.0, s2.dx);

  RecorderSpec rec;
  rec.snapshot_interval = d.snapshot_interval;
  StopCondition until;
  until.t_end = d.t_end;

  DiagnoseResult out;
  if (cfg.jobs > 1) {
    auto first = std::async(std::launch::async, [&] { return solve(env, f1, until, s1, rec); });
    out.run2 = solve(env, f2, until, s2, rec);
    out.run1 = first.get();
  } else {
    out.run1 = solve(env, f1, until, s1, rec);
    out.run2 = solve(env, f2, until, s2, rec);
  }
  const double slope = std::max(out.run1.trajectory.slope.back(), out.run2.trajectory.slope.back());
  out.front_tol = default_touch_tolerance(cfg.solver.dx, slope);
  out.report = check_monotone_intersections(out.run1.snapshots, out.run2.snapshots, d.tol, out.front_tol);
  return out;
}

}  // namespace sharpwave::cli
