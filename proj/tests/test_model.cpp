#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sharpwave/error.hpp"
#include "sharpwave/model.hpp"
#include "support.hpp"

using namespace sharpwave;
using namespace sharpwave::testing;

TEST(Pressure, KnownValues) {
  EXPECT_EQ(pressure_from_density(0.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(pressure_from_density(1.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(pressure_from_density(2.0, 3.0), 6.0);
  EXPECT_DOUBLE_EQ(density_from_pressure(2.0, 2.0), 1.0);
  EXPECT_EQ(density_from_pressure(0.0, 5.0), 0.0);
}

TEST(Pressure, RoundTrip) {
  for (double m : {1.5, 2.0, 4.0})
    for (double u : {1e-6, 0.5, 3.0}) {
      const double back = density_from_pressure(pressure_from_density(u, m), m);
      EXPECT_NEAR(back, u, 1e-12 * u) << "m=" << m << " u=" << u;
    }
}

TEST(Pressure, StrictlyIncreasing) {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = pressure_from_density(0.03 * i, 2.5);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Pressure, DomainErrors) {
  EXPECT_THROW(pressure_from_density(-1e-3, 2.0), DomainError);
  EXPECT_THROW(pressure_from_density(1.0, 1.0), DomainError);
  EXPECT_THROW(density_from_pressure(-1.0, 2.0), DomainError);
  EXPECT_THROW(density_from_pressure(1.0, 0.5), DomainError);
}

TEST(Reaction, FisherDensityValues) {
  const Environment env = presets::fisher();
  EXPECT_EQ(reaction_density(env, 0.3, 0.0), 0.0);
  for (double x : {0.0, 0.37, 0.9}) {
    EXPECT_NEAR(reaction_density(env, x, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(reaction_density(env, x, 0.5), 0.25, 1e-15);
  }
  EXPECT_LT(reaction_density(env, 0.2, 1.5), 0.0);
}

TEST(Reaction, FisherPressureValues) {
  const Environment env = presets::fisher();
  EXPECT_NEAR(reaction_pressure(env, 0.4, 1.0), 0.5, 1e-14);
  EXPECT_EQ(reaction_pressure(env, 0.4, 0.0), 0.0);
  EXPECT_EQ(reaction_pressure(presets::combustion(0.3, 3.0), 0.1, 0.0), 0.0);
}

TEST(Reaction, SingularPressureReactionRejected) {
  // f_base(u) = 1 near 0 with m < 2 makes g ~ u^(m-2) blow up.
  EXPECT_THROW(Environment(1.5, PeriodicCoefficient(1.0), monostable(poly({1.0, -1.0}), 0.5)), DomainError);
  // f_base(u) = u is fine once s = 1 >= 2 - m.
  const Environment ok(1.5, PeriodicCoefficient(1.0), monostable(poly({0.0, 1.0})));
  EXPECT_TRUE(std::isfinite(reaction_pressure(ok, 0.0, 1e-12)));
  EXPECT_NEAR(ok.pressure_reaction_exponent(), 1.0, 1e-12);  // (m - 2 + 1) / (m - 1)
}

TEST(Environment, RejectsBadData) {
  EXPECT_THROW(Environment(1.0, PeriodicCoefficient(1.0), monostable(poly({0.0, 1.0}))), DomainError);
  EXPECT_THROW(Environment(2.0, PeriodicCoefficient(1.0), monostable(poly({0.0, 1.0}), std::nullopt,
                                                                     PeriodicCoefficient(0.5, {{1.0, 1, 0.0}}))),
               DomainError);
  EXPECT_THROW(reaction_family_from_string("tristable"), ConfigError);
}

TEST(Environment, MonostableThetaDefaultsToHalfKappaMin) {
  const Environment env = kpp(0.2);
  EXPECT_NEAR(env.theta(), 0.5 * env.kappa_min(), 1e-12);
  EXPECT_NEAR(env.kappa_min(), 0.8, 1e-6);
  EXPECT_NEAR(env.kappa_max(), 1.2, 1e-6);
}

TEST(Coefficient, DerivativeMatchesDifferences) {
  const PeriodicCoefficient c(1.0, {{0.3, 1, 0.2}, {0.1, 3, -1.0}});
  const double h = 1e-5;
  for (double x : {0.0, 0.13, 0.5, 0.77}) {
    EXPECT_NEAR(c.derivative(x), (c(x + h) - c(x - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(c(x), c(x + 1.0), 1e-12);
  }
}

TEST(Polynomial, PiecewiseEvaluation) {
  const PiecewisePolynomial p({PolyPiece{0.0, 0.3, {0.0}}, PolyPiece{0.3, kInf, {-0.3, 1.0}}});
  EXPECT_EQ(p(0.1), 0.0);
  EXPECT_NEAR(p(0.5), 0.2, 1e-15);
  EXPECT_NEAR(p.derivative(0.5), 1.0, 1e-15);
  EXPECT_EQ(p.leading_power_at_zero(), kInf);
  EXPECT_THROW(PiecewisePolynomial({PolyPiece{0.1, kInf, {1.0}}}), DomainError);
}

TEST(Validation, FisherPasses) { EXPECT_TRUE(validate_F1(presets::fisher()).pass); }

TEST(Validation, BistablePasses) { EXPECT_TRUE(validate_F1(presets::bistable(0.25)).pass); }

TEST(Validation, KappaBelowThetaFailsWithWitness) {
  const Environment env(2.0, PeriodicCoefficient(0.005), monostable(poly({0.0, 1.0}), 0.01));
  const F1Report r = validate_F1(env);
  ASSERT_FALSE(r.pass);
  ASSERT_NE(r.failure(), nullptr);
  EXPECT_EQ(r.failure()->clause, "kappa>theta");
  EXPECT_GE(r.failure()->witness_x, 0.0);
  EXPECT_LT(r.failure()->witness_x, 1.0);
}

TEST(Validation, ModulatedKappaWitnessAtItsMinimum) {
  ReactionSpec r{ReactionFamily::combustion, 0.3, {}, PiecewisePolynomial({PolyPiece{0, 0.3, {0.0}}, PolyPiece{0.3, kInf, {-0.3, 1.0}}}),
                 PeriodicCoefficient(1.0)};
  const Environment env(2.0, PeriodicCoefficient(0.5, {{0.3, 1, 0.0}}), r);
  const F1Report rep = validate_F1(env);
  ASSERT_FALSE(rep.pass);
  EXPECT_EQ(rep.failure()->clause, "kappa>theta");
  EXPECT_NEAR(rep.failure()->witness_x, 0.5, 1e-2);
  EXPECT_NEAR(rep.failure()->value, -0.1, 1e-4);
}

TEST(Lipschitz, FisherBound) {
  const double K = lipschitz_bound(presets::fisher());
  EXPECT_GE(K, 1.0);
  EXPECT_LE(K, 1.1);
}

TEST(Lipschitz, CombustionBoundHoldsOnFinerGrid) {
  const Environment env = presets::combustion(0.3);
  const double K = lipschitz_bound(env);
  const double top = env.kappa_max() + 1.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 1; j <= 10240; ++j) {
      const double x = i / 64.0, u = top * j / 10240.0;
      ASSERT_LE(reaction_density(env, x, u), K * u) << x << " " << u;
    }
}

TEST(Lipschitz, ScalesLinearly) {
  const Environment env = presets::periodic_monostable();
  const double K1 = lipschitz_bound(env);
  const double K2 = lipschitz_bound(env.with_scaled_reaction(2.0));
  EXPECT_NEAR(K2, 2.0 * K1, 1e-9 * K1);
}

// The pressure equation applied to a smooth positive density profile
// reproduces m u^(m-2) u_t from the density equation to O(h^2).
namespace {

double pressure_form_defect(const Environment& env, double h) {
  const double m = env.m();
  const double two_pi = 2.0 * std::numbers::pi;
  auto u = [&](double x) { return 0.5 + 0.2 * std::sin(two_pi * x); };
  auto ux = [&](double x) { return 0.2 * two_pi * std::cos(two_pi * x); };
  auto uxx = [&](double x) { return -0.2 * two_pi * two_pi * std::sin(two_pi * x); };
  auto v = [&](double x) { return pressure_from_density(u(x), m); };
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double x = i / 40.0;
    const double U = u(x);
    const double diffusion = m * (m - 1) * std::pow(U, m - 2) * ux(x) * ux(x) + m * std::pow(U, m - 1) * uxx(x);
    const double ut = diffusion + reaction_density(env, x, U);
    const double exact_vt = m * std::pow(U, m - 2) * ut;
    const double vx = (v(x + h) - v(x - h)) / (2 * h);
    const double vxx = (v(x + h) - 2 * v(x) + v(x - h)) / (h * h);
    const double vt = (m - 1) * v(x) * vxx + vx * vx + reaction_pressure(env, x, v(x));
    worst = std::max(worst, std::abs(vt - exact_vt));
  }
  return worst;
}

}  // namespace

TEST(Reaction, PressureAndDensityFormsAgree) {
  for (double m : {1.5, 2.0, 3.0}) {
    const Environment env = kpp(0.2, m);
    const double e1 = pressure_form_defect(env, 1e-2);
    const double e2 = pressure_form_defect(env, 5e-3);
    EXPECT_LT(e2, 1e-2) << "m=" << m;
    EXPECT_GT(e1 / e2, 3.5) << "m=" << m;
  }
}
