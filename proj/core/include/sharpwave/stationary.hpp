#pragma once

#include <string>
#include <vector>

#include "sharpwave/model.hpp"

namespace sharpwave {

enum class SteadyKind { minimal, maximal, other };

std::string to_string(SteadyKind kind);

/// A 1-periodic positive stationary solution sampled at x_i = i/N, i < N.
struct PeriodicSteadyState {
  std::vector<double> p;  // density
  std::vector<double> q;  // pressure m/(m-1) p^(m-1)
  double residual = 0.0;
  SteadyKind kind = SteadyKind::other;
  double m = 2.0;

  int size() const noexcept { return static_cast<int>(p.size()); }
  double dx() const noexcept { return 1.0 / static_cast<double>(p.size()); }

  /// Periodic cubic (Catmull-Rom) interpolation; exact at the nodes.
  double density_at(double x) const;
  double pressure_at(double x) const;

  double min_density() const;
  double max_density() const;
};

struct SteadyOptions {
  int n_period = 256;
  double tol = 1e-6;
  int max_steps = 20000;
  /// Refuse environments that fail the standing hypotheses.
  bool require_f1 = true;
};

/// Full record of a monotone march, used by the property tests.
struct SteadyMarch {
  PeriodicSteadyState state;
  int steps = 0;
  double time = 0.0;
  /// Largest pointwise move against the expected direction between steps.
  double monotonicity_violation = 0.0;
};

/// Builds a state from density samples and evaluates its residual.
PeriodicSteadyState make_steady_state(const Environment& env, std::vector<double> p, SteadyKind kind);

/// Sup over nodes of |(p^m)'' + f(x,p)(kappa-p)| with centred periodic differences.
double steady_residual(const Environment& env, const PeriodicSteadyState& state);

/// Backward-Euler march of u_t = (u^m)_xx + f(x,u)(kappa-u) on one period from
/// constant data. Stops when the stationary residual is below tol/100.
/// `direction` is +1 when the iterates should increase, -1 when they should decrease.
SteadyMarch march_to_steady(const Environment& env, double initial_density, int direction,
                            SteadyKind kind, const SteadyOptions& opts = {});

/// Minimal periodic stationary solution in [kappa0, kappa^0]: the limit from (kappa0+theta)/2.
PeriodicSteadyState find_min_steady(const Environment& env, const SteadyOptions& opts = {});
/// Maximal one: the limit from kappa^0 + 1.
PeriodicSteadyState find_max_steady(const Environment& env, const SteadyOptions& opts = {});

}  // namespace sharpwave
