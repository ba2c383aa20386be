#include "sharpwave_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpwave/error.hpp"
#include "sharpwave/phaseplane.hpp"
#include "sharpwave/version.hpp"
#include "sharpwave_cli/artifacts.hpp"

namespace sharpwave::cli {

using nlohmann::json;

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

long nodes_per_period(double dx) {
  const double n = 1.0 / dx;
  return std::abs(n - std::round(n)) < 1e-9 * n ? std::lround(n) : 0;
}

ArtifactDir open_run(const RunConfig& cfg, const std::string& command) {
  ArtifactDir dir(cfg.out, cfg.name + "-" + command);
  json manifest;
  manifest["command"] = command;
  manifest["run_id"] = cfg.name + "-" + command;
  manifest["config_hash"] = hex64(fnv1a64(cfg.source.dump()));
  manifest["config"] = cfg.source;
  manifest["versions"] = {{"sharpwave", kVersion},
                          {"model", 1},
                          {"stationary", 1},
                          {"phaseplane", 1},
                          {"solver", 1},
                          {"renorm", 1},
                          {"diagnostics", 1},
                          {"cli", 1}};
  manifest["grid"] = {{"dx", cfg.solver.dx},
                      {"nodes_per_period", nodes_per_period(cfg.solver.dx)},
                      {"steady_nodes_per_period", cfg.steady.n_period},
                      {"left_margin", cfg.solver.left_margin},
                      {"cfl", cfg.solver.cfl},
                      {"window", {cfg.renorm.window_left, cfg.renorm.window_right}},
                      {"phases_per_unit", cfg.renorm.phases_per_unit}};
  dir.write_json("manifest.json", manifest);
  return dir;
}

void write_trajectory(const ArtifactDir& dir, const FrontTrajectory& tr) {
  CsvWriter csv(dir.file("trajectory.csv"), {"t", "b", "slope", "speed"});
  for (std::size_t i = 0; i < tr.size(); ++i) csv.row({tr.t[i], tr.b[i], tr.slope[i], tr.speed[i]});
  csv.close();
}

void write_steady(const ArtifactDir& dir, const std::string& name, const PeriodicSteadyState& s) {
  CsvWriter csv(dir.file(name), {"x", "p", "q"});
  for (int i = 0; i < s.size(); ++i) csv.row({i * s.dx(), s.p[i], s.q[i]});
  csv.close();
}

json steady_summary(const PeriodicSteadyState& s) {
  return {{"kind", to_string(s.kind)},
          {"residual", s.residual},
          {"min_density", s.min_density()},
          {"max_density", s.max_density()},
          {"nodes", s.size()}};
}

json f1_json(const F1Report& r) {
  json clauses = json::array();
  for (const auto& c : r.clauses)
    clauses.push_back({{"clause", c.clause},
                       {"pass", c.pass},
                       {"witness_x", c.witness_x},
                       {"witness_u", c.witness_u},
                       {"value", c.value}});
  return {{"pass", r.pass}, {"clauses", clauses}};
}

struct SubsolutionOutcome {
  bool pass = false;
  std::string failure;
  std::optional<F0Profile> f0;
  std::optional<CompactSubsolution> sub;
  std::optional<F2Report> f2;
  json summary;
};

SubsolutionOutcome construct_subsolution(const RunConfig& cfg) {
  if (!cfg.subsolution.kind)
    throw ConfigError("subsolution.case is required for the " + to_string(cfg.env().family()) + " family");
  const Environment& env = cfg.env();
  const F0Options& o = cfg.subsolution.f0;
  SubsolutionOutcome out;
  out.summary["case"] = to_string(*cfg.subsolution.kind);
  out.summary["c"] = o.c;
  try {
    out.f0 = build_f0(env, *cfg.subsolution.kind, o);
    out.sub = shoot_compact_wave(out.f0->f0, env.m(), o.c, o.q0_fraction * out.f0->kappa0);
  } catch (const DomainError& e) {
    out.failure = e.what();
    out.summary["pass"] = false;
    out.summary["failure"] = out.failure;
    return out;
  }
  out.f2 = verify_F2(env, *out.sub);
  out.pass = out.f2->pass;
  out.summary["f0"] = {{"kappa0", out.f0->kappa0},
                       {"threshold", out.f0->threshold},
                       {"amplitude", out.f0->amplitude},
                       {"integral_margin", out.f0->integral.margin},
                       {"integral_argmin_u", out.f0->integral.argmin_u},
                       {"integral_at_zero", out.f0->integral.value_at_zero},
                       {"domination_margin", out.f0->domination_margin}};
  out.summary["profile"] = {{"q0", out.sub->q0},
                            {"l0", out.sub->l0},
                            {"l_plus", out.sub->l_plus},
                            {"l_minus", out.sub->l_minus},
                            {"edge_slope", finite_or_null(out.sub->edge_slope)},
                            {"edge_slope_infinite", std::isinf(out.sub->edge_slope)},
                            {"edge_flux", out.sub->edge_flux},
                            {"trailing_flux", out.sub->trailing_flux}};
  out.summary["F2"] = {{"pass", out.f2->pass},
                       {"edge_ok", out.f2->edge_ok},
                       {"min_value", out.f2->min_value},
                       {"witness_x", out.f2->witness_x},
                       {"witness_z", out.f2->witness_z}};
  out.summary["pass"] = out.pass;
  if (!out.pass) out.failure = out.f2->edge_ok ? "subsolution inequality fails" : "edge slope does not exceed c";
  return out;
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "validate");
  const F1Report f1 = validate_F1(cfg.env());
  json summary;
  summary["F1"] = f1_json(f1);
  for (const auto& c : f1.clauses) {
    log << "F1 " << c.clause << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.pass) log << " at x = " << c.witness_x << ", u = " << c.witness_u << " (value " << c.value << ")";
    log << "\n";
  }
  bool ok = f1.pass;
  if (f1.pass && cfg.subsolution.check && cfg.subsolution.kind) {
    const auto sub = construct_subsolution(cfg);
    summary["F2"] = sub.summary;
    log << "F2 (" << to_string(*cfg.subsolution.kind) << ", c = " << cfg.subsolution.f0.c
        << "): " << (sub.pass ? "pass" : "FAIL: " + sub.failure) << "\n";
    ok = sub.pass;
  } else if (f1.pass && cfg.subsolution.check) {
    summary["F2"] = {{"skipped", "no lower profile for the " + to_string(cfg.env().family()) + " family"}};
    log << "F2: skipped (set subsolution.case to check it)\n";
  }
  summary["pass"] = ok;
  dir.write_json("summary.json", summary);
  log << (ok ? "validate: pass" : "validate: FAIL") << "\n";
  return ok ? exit_ok : exit_domain;
}

int cmd_steady(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "steady");
  const SteadyPair s = compute_steady_pair(cfg.env(), cfg.steady, cfg.jobs);
  write_steady(dir, "steady_p1.csv", s.p1);
  write_steady(dir, "steady_p2.csv", s.p2);
  double order_violation = 0.0;
  for (int i = 0; i < s.p1.size(); ++i) order_violation = std::max(order_violation, s.p1.p[i] - s.p2.p[i]);
  json summary = {{"p1", steady_summary(s.p1)}, {"p2", steady_summary(s.p2)}, {"order_violation", order_violation}};
  dir.write_json("summary.json", summary);
  log << "p1 in [" << s.p1.min_density() << ", " << s.p1.max_density() << "], residual " << s.p1.residual << "\n"
      << "p2 in [" << s.p2.min_density() << ", " << s.p2.max_density() << "], residual " << s.p2.residual << "\n";
  return exit_ok;
}

int cmd_subsolution(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "subsolution");
  const auto sub = construct_subsolution(cfg);
  if (sub.sub) {
    const auto psi = sub.sub->psi();
    CsvWriter csv(dir.file("subsolution.csv"), {"z", "phi", "psi"});
    for (std::size_t i = 0; i < sub.sub->z.size(); ++i) csv.row({sub.sub->z[i], sub.sub->phi[i], psi[i]});
    csv.close();
    CsvWriter f0(dir.file("f0.csv"), {"u", "f0"});
    const int n = 512;
    for (int i = 0; i <= n; ++i) {
      const double u = sub.f0->kappa0 * i / n;
      f0.row({u, sub.f0->f0(u)});
    }
    f0.close();
  }
  dir.write_json("summary.json", sub.summary);
  if (sub.sub)
    log << "profile: l0 = " << sub.sub->l0 << ", edge slope = " << sub.sub->edge_slope << " (c = " << sub.sub->c << ")\n";
  log << (sub.pass ? "subsolution: pass" : "subsolution: FAIL: " + sub.failure) << "\n";
  return sub.pass ? exit_ok : exit_domain;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "simulate");
  const Environment& env = cfg.env();
  const SteadyPair steady = compute_steady_pair(env, cfg.steady, cfg.jobs);
  const PeriodicSteadyState& q = steady.p2;
  const SolverConfig solver = clamped_solver(cfg.solver, q);
  const SimulateOptions& o = cfg.simulate;
  const double lo = std::floor(o.start) - solver.left_margin;
  Field start = init_heaviside(q, o.start, lo, o.start + o.window_right, solver.dx);
  RecorderSpec rec;
  rec.snapshot_interval = o.snapshot_interval;
  StopCondition until;
  until.t_end = o.t_end;
  const SolveResult run = solve(env, std::move(start), until, solver, rec);

  write_trajectory(dir, run.trajectory);
  CsvWriter csv(dir.file("snapshots.csv"), {"t", "x", "v", "u"});
  for (const auto& s : run.snapshots)
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      if (s.x(i) > s.b + s.dx) break;
      csv.row({s.t, s.x(i), s.v[i], density_from_pressure(s.v[i], env.m())});
    }
  csv.close();

  const auto& tr = run.trajectory;
  const double speed = (tr.b.back() - tr.b.front()) / (tr.t.back() - tr.t.front());
  json summary = {{"t_end", run.field.t},
                  {"front", run.field.b},
                  {"average_speed", speed},
                  {"final_slope", tr.slope.back()},
                  {"steps", run.steps},
                  {"clipped_mass", run.clipped_mass},
                  {"snapshots", run.snapshots.size()}};
  dir.write_json("summary.json", summary);
  log << "t = " << run.field.t << ": front at " << run.field.b << ", average speed " << speed << " (" << run.steps
      << " steps)\n";
  return exit_ok;
}

int cmd_wave(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "wave");
  const WavePipeline p = run_wave_pipeline(cfg);
  const RenormSequence& seq = p.sequence;

  write_trajectory(dir, p.run.trajectory);
  {
    CsvWriter csv(dir.file("convergence.csv"), {"n", "t_n", "s_n", "d_n"});
    for (std::size_t k = 0; k < seq.n.size(); ++k)
      csv.row(std::vector<std::string>{std::to_string(seq.n[k]), format_number(seq.t_n[k]),
                                       k < seq.s_n.size() ? format_number(seq.s_n[k]) : "",
                                       k < seq.convergence.size() ? format_number(seq.convergence[k]) : ""});
    csv.close();
  }

  json summary;
  summary["status"] = to_string(p.status);
  summary["message"] = p.message;
  summary["steps"] = p.run.steps;
  summary["clipped_mass"] = p.run.clipped_mass;
  summary["gap_monotonicity_violation"] = seq.gap_monotonicity_violation;
  summary["decrease_violation"] = seq.decrease_violation;
  summary["s_n"] = seq.s_n;
  summary["convergence"] = seq.convergence;
  summary["steady"] = {{"p1", steady_summary(p.steady.p1)}, {"p2", steady_summary(p.steady.p2)}};

  if (p.wave) {
    const WaveResult& w = *p.wave;
    CsvWriter prof(dir.file("profile.csv"), {"x", "t", "V"});
    for (const auto& fr : w.V)
      for (std::size_t i = 0; i < fr.v.size(); ++i) prof.row({w.window_x(i), fr.tau, fr.v[i]});
    prof.close();
    CsvWriter bnd(dir.file("boundary.csv"), {"t", "B", "Bprime"});
    for (std::size_t i = 0; i < w.boundary.tau.size(); ++i)
      bnd.row({w.boundary.tau[i], w.boundary.B[i], w.boundary.Bprime[i]});
    bnd.close();
    summary["wave"] = {{"T", w.T},
                       {"average_speed", w.average_speed},
                       {"delta_star", w.delta_star},
                       {"max_V", w.max_V},
                       {"n_converged", w.n_converged},
                       {"n_last", w.n_last}};
    log << "T = " << w.T << ", average speed = " << w.average_speed << ", delta* = " << w.delta_star
        << ", max V = " << w.max_V << "\n";
  }
  if (p.report) {
    const WaveReport& r = *p.report;
    json tails = json::array();
    for (const auto& t : r.tail) tails.push_back({{"kind", t.kind}, {"residual", t.residual}});
    summary["verification"] = {{"positive", r.positive},
                               {"min_interior", r.min_interior},
                               {"max_beyond", r.max_beyond},
                               {"tail", tails},
                               {"tail_residual", r.tail_residual},
                               {"tail_ok", r.tail_ok},
                               {"darcy_residual", r.darcy_residual},
                               {"darcy_ok", r.darcy_ok},
                               {"min_Vt", r.min_Vt},
                               {"monotone_ok", r.monotone_ok},
                               {"periodicity_defect", r.periodicity_defect},
                               {"periodic_ok", r.periodic_ok},
                               {"gradient_bound", r.gradient_bound},
                               {"lower_profile_min", r.lower_profile_min},
                               {"pass", r.pass}};
    log << "positivity " << (r.positive ? "ok" : "FAIL") << ", tail " << r.tail_residual
        << (r.tail_ok ? " ok" : " FAIL") << ", Darcy " << r.darcy_residual << (r.darcy_ok ? " ok" : " FAIL")
        << ", min V_t " << r.min_Vt << (r.monotone_ok ? " ok" : " FAIL") << ", periodicity "
        << r.periodicity_defect << (r.periodic_ok ? " ok" : " FAIL") << "\n";
  }
  if (p.linfty) {
    const LinftyReport& l = *p.linfty;
    CsvWriter csv(dir.file("linfty.csv"), {"n", "gap"});
    for (std::size_t i = 0; i < l.n.size(); ++i)
      csv.row(std::vector<std::string>{std::to_string(l.n[i]), format_number(l.gap[i])});
    csv.close();
    summary["linfty"] = {{"check_n", l.check_n},
                         {"gap_at_check", l.gap_at_check},
                         {"threshold", l.threshold},
                         {"decreasing", l.decreasing},
                         {"initial_data", p.lower_sequence ? "p1" : "p2 (= p1)"},
                         {"pass", l.pass}};
    log << "whole-line gap at n = " << l.check_n << ": " << l.gap_at_check << " (threshold " << l.threshold << ")\n";
  }
  summary["pass"] = p.pass;
  dir.write_json("summary.json", summary);
  log << "wave: " << to_string(p.status) << ": " << p.message << "\n";
  if (p.status != WaveStatus::converged) return exit_nonconvergence;
  return p.pass ? exit_ok : exit_domain;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& log) {
  ArtifactDir dir = open_run(cfg, "diagnose");
  const SteadyPair steady = compute_steady_pair(cfg.env(), cfg.steady, cfg.jobs);
  const DiagnoseResult d = run_diagnose(cfg, steady);
  CsvWriter csv(dir.file("intersections.csv"), {"t", "count", "class", "reversed"});
  for (const auto& r : d.report.rows)
    csv.row(std::vector<std::string>{format_number(r.t), std::to_string(r.count), to_string(r.relation),
                                     r.reversed ? "1" : "0"});
  csv.close();
  auto when = [](const std::optional<double>& t) { return t ? json(*t) : json(nullptr); };
  json summary = {{"nonincreasing", d.report.nonincreasing},
                  {"first_steeper", when(d.report.first_steeper)},
                  {"first_touch_order", when(d.report.first_touch)},
                  {"first_strict_order", when(d.report.first_strict)},
                  {"final_count", d.report.rows.empty() ? 0 : d.report.rows.back().count},
                  {"front_tolerance", d.front_tol}};
  dir.write_json("summary.json", summary);
  for (const auto& r : d.report.rows)
    log << "t = " << format_number(r.t) << ": " << r.count << " sign change(s), " << to_string(r.relation)
        << (r.reversed ? " (reversed)" : "") << "\n";
  log << "diagnose: intersection number " << (d.report.nonincreasing ? "nonincreasing" : "INCREASED") << "\n";
  return d.report.nonincreasing ? exit_ok : exit_domain;
}

int dispatch(const std::string& command, const std::string& config_path, const Overrides& overrides,
             std::ostream& log, std::ostream& err) {
  try {
    const RunConfig cfg = load_run_config(config_path, overrides);
    if (command == "validate") return cmd_validate(cfg, log);
    if (command == "steady") return cmd_steady(cfg, log);
    if (command == "subsolution") return cmd_subsolution(cfg, log);
    if (command == "simulate") return cmd_simulate(cfg, log);
    if (command == "wave") return cmd_wave(cfg, log);
    if (command == "diagnose") return cmd_diagnose(cfg, log);
    err << "unknown command " << command << "\n";
    return exit_config;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << " (x = " << e.x() << ", t = " << e.t() << ")\n";
    return exit_abort;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return exit_nonconvergence;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return exit_domain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_domain;
  }
}

}  // namespace sharpwave::cli
