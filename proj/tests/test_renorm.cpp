#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "sharpwave/error.hpp"
#include "sharpwave/phaseplane.hpp"
#include "sharpwave/renorm.hpp"
#include "support.hpp"

using namespace sharpwave;
using namespace sharpwave::testing;

namespace {

struct Renormalised {
  PeriodicSteadyState q;
  SolveResult run;
  RenormSequence seq;
};

Renormalised renormalise(const Environment& env, double dx, const RenormConfig& rc, double margin = 18) {
  Renormalised r{find_max_steady(env), {}, {}};
  SolverConfig cfg;
  cfg.dx = dx;
  cfg.left_margin = margin;
  const PeriodicSteadyState q = r.q;
  cfg.left_value = [q](double x) { return q.pressure_at(x); };
  RecorderSpec rec;
  rec.phases_per_unit = rc.phases_per_unit;
  rec.phase_from = static_cast<double>(rc.n_min);
  StopCondition until;
  until.front_station = static_cast<double>(rc.n_max + 1);
  r.run = solve(env, init_heaviside(r.q, 0.0, -margin, 2.0, dx), until, cfg, rec);
  r.seq = extract_sequence(r.run, rc);
  return r;
}

const Renormalised& fisher_at(double dx) {
  static std::map<double, Renormalised> cache;
  auto it = cache.find(dx);
  if (it == cache.end()) it = cache.emplace(dx, renormalise(presets::fisher(), dx, RenormConfig{})).first;
  return it->second;
}

const Renormalised& periodic_at(double dx) {
  static std::map<double, Renormalised> cache;
  auto it = cache.find(dx);
  if (it == cache.end()) it = cache.emplace(dx, renormalise(presets::periodic_monostable(), dx, RenormConfig{})).first;
  return it->second;
}

FrontTrajectory synthetic(double speed) {
  FrontTrajectory tr;
  for (int i = 0; i <= 400; ++i) {
    const double t = i * 0.025;
    tr.push(t, speed * t, speed, speed);
  }
  return tr;
}

}  // namespace

TEST(CrossingTimes, UnitSpeed) {
  const auto t = crossing_times(synthetic(1.0), {1, 2, 3, 7});
  ASSERT_EQ(t.size(), 4u);
  EXPECT_NEAR(t[0], 1.0, 1e-12);
  EXPECT_NEAR(t[3], 7.0, 1e-12);
}

TEST(CrossingTimes, DoubleSpeed) {
  const auto t = crossing_times(synthetic(2.0), {1, 2, 3, 4, 5});
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(t[n - 1], n / 2.0, 1e-12);
}

TEST(CrossingTimes, StationNotReached) {
  EXPECT_THROW(crossing_times(synthetic(1.0), {5, 11}), DomainError);
}

TEST(CrossingTimes, FisherGapsNearOne) {
  const auto& r = fisher_at(1.0 / 128);
  const auto t = crossing_times(r.run.trajectory, {5, 6, 7, 8, 9, 10});
  for (std::size_t k = 1; k < t.size(); ++k) {
    EXPECT_GT(t[k], t[k - 1]);
    EXPECT_NEAR(t[k] - t[k - 1], 1.0, 0.02);
  }
}

TEST(Sequence, InvariantsOnFisher) {
  const auto& seq = fisher_at(1.0 / 128).seq;
  for (std::size_t k = 1; k < seq.t_n.size(); ++k) EXPECT_GT(seq.t_n[k], seq.t_n[k - 1]);
  EXPECT_LE(seq.gap_monotonicity_violation, 1e-3);
  EXPECT_LE(seq.decrease_violation, 1e-6);
  // v_n(0,0) vanishes up to the front interpolation scale.
  EXPECT_LE(seq.origin_value, 2.0 * seq.dx * 1.5);
}

TEST(Sequence, HomogeneousTranslationInvariance) {
  const auto& seq = fisher_at(1.0 / 128).seq;
  ASSERT_GE(seq.convergence.size(), 4u);
  for (std::size_t k = seq.convergence.size() - 4; k < seq.convergence.size(); ++k) EXPECT_LE(seq.convergence[k], 1e-3);
}

TEST(Sequence, PhaseFramesLandOnStations) {
  const auto& seq = fisher_at(1.0 / 128).seq;
  for (std::size_t k = 0; k < seq.window.size(); ++k)
    for (std::size_t j = 0; j < seq.window[k].size(); ++j)
      EXPECT_NEAR(seq.window[k][j].b, static_cast<double>(j) / seq.config.phases_per_unit, 1e-12);
}

TEST(Sequence, InsufficientRecording) {
  const auto& r = fisher_at(1.0 / 128);
  RenormConfig rc;
  rc.n_max = 40;
  EXPECT_THROW(extract_sequence(r.run, rc), DomainError);
  SolveResult bare = r.run;
  bare.phase_snapshots.clear();
  EXPECT_THROW(extract_sequence(bare, RenormConfig{}), DomainError);
}

TEST(Wave, FisherPeriodAndDarcyFloor) {
  const auto& r = fisher_at(1.0 / 128);
  const WaveResult w = extract_wave(r.seq, 1e-3);
  EXPECT_TRUE(w.converged);
  EXPECT_NEAR(w.T, 1.0, 0.02);
  EXPECT_NEAR(w.delta_star, 1.0, 0.05);
  EXPECT_NEAR(w.average_speed * w.T, 1.0, 1e-9);
  EXPECT_NEAR(w.boundary.B.front(), 0.0, 1e-12);
}

TEST(Wave, FisherVerification) {
  const auto& r = fisher_at(1.0 / 128);
  const WaveResult w = extract_wave(r.seq, 1e-3);
  const WaveReport rep = verify_wave(presets::fisher(), w, {r.q});
  EXPECT_TRUE(rep.positive);
  EXPECT_LE(rep.tail_residual, 1e-3);
  EXPECT_TRUE(rep.darcy_ok) << rep.darcy_residual;
  EXPECT_GE(rep.min_Vt, -1e-4);
  EXPECT_TRUE(rep.periodic_ok) << rep.periodicity_defect;
  EXPECT_GT(rep.lower_profile_min, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(Wave, ReactionOffNeverConverges) {
  // Without reaction the clamped front slows like sqrt(t): s_n keeps growing.
  const double dx = 1.0 / 64;
  SolverConfig cfg;
  cfg.dx = dx;
  cfg.left_value = [](double) { return 2.0; };
  RenormConfig rc;
  rc.n_max = 8;
  RecorderSpec rec;
  rec.phases_per_unit = rc.phases_per_unit;
  rec.phase_from = static_cast<double>(rc.n_min);
  StopCondition until;
  until.front_station = static_cast<double>(rc.n_max + 1);
  const SolveResult run =
      solve(reaction_free(2.0), init_step([](double) { return 2.0; }, 0.0, -cfg.left_margin, 2.0, dx), until, cfg, rec);
  const RenormSequence seq = extract_sequence(run, rc);
  for (std::size_t k = 1; k < seq.s_n.size(); ++k) EXPECT_GT(seq.s_n[k], seq.s_n[k - 1] + 0.1);
  EXPECT_THROW(extract_wave(seq, 1e-3), ConvergenceError);
}

TEST(Wave, EvenAndOddSubsequencesAgree) {
  const auto& seq = periodic_at(1.0 / 128).seq;
  // The last even and odd members of the tail agree with each other within 2 tol.
  const std::size_t K = seq.window.size();
  ASSERT_GE(K, 4u);
  double worst = 0.0;
  for (std::size_t a = K - 4; a < K; ++a)
    for (std::size_t b = a + 1; b < K; b += 2)
      for (std::size_t j = 0; j < seq.window[a].size(); ++j)
        for (std::size_t i = 0; i < seq.window[a][j].v.size(); ++i)
          worst = std::max(worst, std::abs(seq.window[a][j].v[i] - seq.window[b][j].v[i]));
  EXPECT_LE(worst, 2e-3);
}

TEST(Wave, PeriodicDefectAndRefinement) {
  const auto& coarse = periodic_at(1.0 / 128);
  const auto& fine = periodic_at(1.0 / 256);
  const WaveResult wc = extract_wave(coarse.seq, 1e-3);
  const WaveResult wf = extract_wave(fine.seq, 1e-3);
  const WaveReport rc = verify_wave(presets::periodic_monostable(), wc, {coarse.q});
  const WaveReport rf = verify_wave(presets::periodic_monostable(), wf, {fine.q});
  EXPECT_LE(rc.periodicity_defect, 1e-2 * wc.max_V);
  EXPECT_LE(rf.periodicity_defect, 1e-2 * wf.max_V);
  EXPECT_LE(std::abs(wc.T - wf.T) / wf.T, 1e-2);
  // Gradient constant near the front is grid-stable.
  EXPECT_LE(std::abs(rc.gradient_bound - rf.gradient_bound) / rf.gradient_bound, 0.1);
  EXPECT_GT(wf.delta_star, 0.0);
}

TEST(Wave, AverageSpeedAboveSubsolutionSpeed) {
  const Environment env = presets::periodic_monostable();
  const F0Profile f0 = build_f0(env, F0Case::monostable);
  const CompactSubsolution sub = shoot_compact_wave(f0.f0, env.m(), 0.05, 0.95 * f0.kappa0);
  ASSERT_TRUE(verify_F2(env, sub).pass);
  const auto& seq = periodic_at(1.0 / 128).seq;
  for (double s : seq.s_n) EXPECT_GE(1.0 / s, sub.c - 1e-3);
}

TEST(Linfty, FisherWholeLineGapShrinks) {
  const auto& r = fisher_at(1.0 / 128);
  const WaveResult w = extract_wave(r.seq, 1e-3);
  const LinftyReport rep = check_linfty(r.seq, w);
  EXPECT_TRUE(rep.decreasing);
  EXPECT_TRUE(rep.pass) << rep.gap_at_check;
  for (std::size_t k = 1; k < rep.gap.size(); ++k) EXPECT_LE(rep.gap[k], rep.gap[k - 1] + 1e-3);
}
