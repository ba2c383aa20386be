#include <benchmark/benchmark.h>

#include "sharpwave/phaseplane.hpp"
#include "sharpwave/renorm.hpp"
#include "sharpwave/solver.hpp"
#include "sharpwave/stationary.hpp"

using namespace sharpwave;

namespace {

Field developed_front(const Environment& env, const PeriodicSteadyState& q, const SolverConfig& cfg) {
  StopCondition until;
  until.t_end = 2.0;
  return solve(env, init_heaviside(q, 0.0, -cfg.left_margin, 2.0, cfg.dx), until, cfg).field;
}

SolverConfig clamped(const PeriodicSteadyState& q, double dx) {
  SolverConfig cfg;
  cfg.dx = dx;
  cfg.left_value = [q](double x) { return q.pressure_at(x); };
  return cfg;
}

}  // namespace

// One time step on a developed front; arg is nodes per period.
static void BM_Step(benchmark::State& state) {
  const Environment env = presets::periodic_monostable();
  const auto q = find_max_steady(env);
  const SolverConfig cfg = clamped(q, 1.0 / static_cast<double>(state.range(0)));
  const Field f = developed_front(env, q, cfg);
  Stepper stepper(env, cfg);
  for (auto _ : state) {
    Field g = f;
    stepper.step(g);
    benchmark::DoNotOptimize(g.v.data());
  }
  state.counters["nodes"] = static_cast<double>(f.size());
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

// Front travelling one period.
static void BM_OnePeriod(benchmark::State& state) {
  const Environment env = presets::fisher();
  const auto q = find_max_steady(env);
  const SolverConfig cfg = clamped(q, 1.0 / static_cast<double>(state.range(0)));
  const Field f = developed_front(env, q, cfg);
  StopCondition until;
  until.front_station = f.b + 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(env, f, until, cfg).steps);
}
BENCHMARK(BM_OnePeriod)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_MaxSteady(benchmark::State& state) {
  const Environment env = presets::periodic_monostable();
  SteadyOptions opts;
  opts.n_period = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_max_steady(env, opts).residual);
}
BENCHMARK(BM_MaxSteady)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Shoot(benchmark::State& state) {
  const Environment env = presets::fisher();
  const F0Profile f0 = build_f0(env, F0Case::monostable);
  for (auto _ : state) benchmark::DoNotOptimize(shoot_compact_wave(f0.f0, env.m(), 0.05, 0.95 * f0.kappa0).l0);
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

static void BM_VerifyF2(benchmark::State& state) {
  const Environment env = presets::periodic_monostable();
  const F0Profile f0 = build_f0(env, F0Case::monostable);
  const CompactSubsolution sub = shoot_compact_wave(f0.f0, env.m(), 0.05, 0.95 * f0.kappa0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_F2(env, sub).min_value);
}
BENCHMARK(BM_VerifyF2)->Unit(benchmark::kMillisecond);

static void BM_ExtractSequence(benchmark::State& state) {
  const Environment env = presets::fisher();
  const auto q = find_max_steady(env);
  const SolverConfig cfg = clamped(q, 1.0 / 128);
  RenormConfig rc;
  rc.n_max = 10;
  RecorderSpec rec;
  rec.phases_per_unit = rc.phases_per_unit;
  rec.phase_from = static_cast<double>(rc.n_min);
  StopCondition until;
  until.front_station = static_cast<double>(rc.n_max + 1);
  const SolveResult run = solve(env, init_heaviside(q, 0.0, -cfg.left_margin, 2.0, cfg.dx), until, cfg, rec);
  for (auto _ : state) benchmark::DoNotOptimize(extract_sequence(run, rc).convergence.size());
}
BENCHMARK(BM_ExtractSequence)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
