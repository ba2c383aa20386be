#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sharpwave/error.hpp"
#include "sharpwave/stationary.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace sharpwave;
using namespace sharpwave::testing;

namespace {

Environment two_branch_multistable() {
  // f_base = u (u - 0.8)(u - 1.2): constants 0.8 and 1.2 are both stable in [kappa0, kappa^0].
  ReactionSpec r{ReactionFamily::multistable, 0.5, {0.8, 1.2}, poly({0.0, 0.96, -2.0, 1.0}),
                 PeriodicCoefficient(1.0, {{0.1, 1, 0.0}})};
  return Environment(2.0, PeriodicCoefficient(1.0, {{0.3, 1, 0.0}}), r);
}

}  // namespace

TEST(SteadyResidual, KnownValues) {
  const Environment env = presets::fisher();
  const auto one = make_steady_state(env, std::vector<double>(64, 1.0), SteadyKind::other);
  EXPECT_LT(steady_residual(env, one), 1e-14);
  const auto half = make_steady_state(env, std::vector<double>(64, 0.5), SteadyKind::other);
  EXPECT_NEAR(steady_residual(env, half), 0.5 * (1.0 - 0.5), 1e-14);
}

TEST(Steady, FisherConstant) {
  const Environment env = presets::fisher();
  const auto p1 = find_min_steady(env), p2 = find_max_steady(env);
  for (int i = 0; i < p1.size(); ++i) {
    EXPECT_NEAR(p1.p[i], 1.0, 1e-6);
    EXPECT_NEAR(p2.p[i], 1.0, 1e-6);
    EXPECT_NEAR(p1.q[i], 2.0, 2e-6);
  }
  EXPECT_EQ(p1.kind, SteadyKind::minimal);
  EXPECT_EQ(p2.kind, SteadyKind::maximal);
}

TEST(Steady, BistableAndCombustionConstant) {
  for (const Environment& env : {presets::bistable(0.25), presets::combustion(0.3)}) {
    const auto p1 = find_min_steady(env), p2 = find_max_steady(env);
    for (int i = 0; i < p1.size(); ++i) {
      EXPECT_NEAR(p1.p[i], 1.0, 1e-6);
      EXPECT_NEAR(p2.p[i], 1.0, 1e-6);
    }
  }
}

TEST(Steady, ModulatedMatchesCollocationOracle) {
  for (double amp : {0.1, 0.2}) {
    const Environment env = kpp(amp);
    const auto p1 = find_min_steady(env), p2 = find_max_steady(env);
    const auto fine = collocation_oracle(env, 4 * p1.size(), 1.0);
    EXPECT_LE(p1.residual, 1e-6);
    EXPECT_LE(p2.residual, 1e-6);
    EXPECT_LT(sup_gap_to_oracle(p1, fine), 1e-4) << "amp " << amp;
    EXPECT_LT(sup_gap_to_oracle(p2, fine), 1e-4) << "amp " << amp;
    EXPECT_GE(p1.min_density(), 1.0 - amp - 1e-6);
    EXPECT_LE(p1.max_density(), 1.0 + amp + 1e-6);
  }
}

TEST(Steady, OracleItselfIsAccurate) {
  // The oracle on its own grid has a residual at round-off and is second order.
  const Environment env = kpp(0.1);
  const auto a = collocation_oracle(env, 512, 1.0);
  const auto b = collocation_oracle(env, 1024, 1.0);
  const auto c = collocation_oracle(env, 2048, 1.0);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < 512; ++i) {
    e1 = std::max(e1, std::abs(a[i] - b[2 * i]));
    e2 = std::max(e2, std::abs(b[2 * i] - c[4 * i]));
  }
  EXPECT_GT(e1 / e2, 3.5);
}

TEST(Steady, OrderingAcrossEnvironments) {
  const std::vector<Environment> envs = {presets::fisher(), kpp(0.2), kpp(0.35, 3.0), presets::combustion(0.3),
                                         presets::bistable(0.25), two_branch_multistable()};
  for (const auto& env : envs) {
    SteadyOptions o;
    o.require_f1 = false;
    const auto p1 = find_min_steady(env, o), p2 = find_max_steady(env, o);
    for (int i = 0; i < p1.size(); ++i) EXPECT_LE(p1.p[i], p2.p[i] + 1e-9);
  }
}

TEST(Steady, TwoStableBranchesGiveStrictGap) {
  const Environment env = two_branch_multistable();
  EXPECT_FALSE(validate_F1(env).pass);  // f < 0 on (0.8, 1.2): outside the standing hypotheses
  EXPECT_THROW(find_min_steady(env), DomainError);
  SteadyOptions o;
  o.require_f1 = false;
  const auto p1 = find_min_steady(env, o), p2 = find_max_steady(env, o);
  EXPECT_LE(p1.residual, 1e-6);
  EXPECT_LE(p2.residual, 1e-6);
  for (int i = 0; i < p1.size(); ++i) {
    EXPECT_NEAR(p1.p[i], 0.8, 1e-6);
    EXPECT_NEAR(p2.p[i], 1.2, 1e-6);
  }
}

TEST(Steady, MarchIsMonotone) {
  const Environment env = kpp(0.2);
  const auto up = march_to_steady(env, 0.5 * (env.kappa_min() + env.theta()), +1, SteadyKind::minimal);
  const auto down = march_to_steady(env, env.kappa_max() + 1.0, -1, SteadyKind::maximal);
  EXPECT_LE(up.monotonicity_violation, 1e-8);
  EXPECT_LE(down.monotonicity_violation, 1e-8);
  EXPECT_GT(up.steps, 0);
}

TEST(Steady, TranslationSymmetry) {
  const Environment a = kpp(0.2, 2.0, 0.0);
  const Environment b = kpp(0.2, 2.0, -std::numbers::pi);  // kappa(x - 0.5)
  const auto pa = find_min_steady(a), pb = find_min_steady(b);
  const int n = pa.size();
  for (int i = 0; i < n; ++i) EXPECT_NEAR(pb.p[(i + n / 2) % n], pa.p[i], 1e-8);
}

TEST(Steady, InterpolationIsPeriodicAndExactAtNodes) {
  const auto s = find_min_steady(kpp(0.2));
  for (int i = 0; i < s.size(); i += 17) EXPECT_NEAR(s.density_at(i * s.dx()), s.p[i], 1e-14);
  EXPECT_NEAR(s.density_at(0.3), s.density_at(1.3), 1e-12);
  EXPECT_NEAR(s.density_at(-0.7), s.density_at(0.3), 1e-12);
}
