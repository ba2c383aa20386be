#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sharpwave/model.hpp"

namespace sharpwave {

/// A reaction profile in u only, f0(u).
using UProfile = std::function<double(double)>;

struct IntegralCheck {
  bool pass = false;
  double margin = 0.0;    // min over u of F(u) = int_u^kappa0 r^(m-1) f0(r) dr
  double argmin_u = 0.0;
  double value_at_zero = 0.0;  // F(0)
};

/// Evaluates F(u) on a uniform grid of [0, kappa0) by composite Simpson
/// quadrature and reports min F. Passes iff min F > 0.
IntegralCheck check_integral_condition(const UProfile& f0, double m, double kappa0, int n_grid = 4000);

enum class F0Case { monostable, combustion, bistable };

std::string to_string(F0Case c);

/// A compactly supported travelling-wave subsolution of the homogeneous
/// problem (q^m)'' + c q' + f0(q) = 0 on [-l0, l0], recentred.
struct CompactSubsolution {
  double m = 2.0;
  double c = 0.0;
  double q0 = 0.0;
  double l0 = 0.0;
  double l_plus = 0.0;   // touchdown distance ahead of the peak
  double l_minus = 0.0;  // touchdown distance behind the peak
  /// -psi'(l0 - 0) with psi the pressure of phi. Infinite whenever the
  /// density flux (phi^m)' is nonzero at touchdown.
  double edge_slope = 0.0;
  /// (phi^m)'(l0 - 0), the finite flux at the leading edge.
  double edge_flux = 0.0;
  /// (phi^m)'(-l0 + 0) at the trailing edge.
  double trailing_flux = 0.0;
  std::vector<double> z;    // ascending, z.front() = -l0, z.back() = l0
  std::vector<double> phi;  // density
  UProfile f0;

  /// Linear interpolation of phi, zero outside [-l0, l0].
  double phi_at(double z) const;
  std::vector<double> psi() const;
};

struct ShootOptions {
  double switch_fraction = 0.05;  // switch to q-parametrisation below this fraction of q0
  double z_step = 1e-3;           // RK4 step in z near the peak
  int q_steps = 4000;             // RK4 steps in the q-parametrised tail
  double z_budget = 200.0;        // give up if no touchdown within this distance
  double z_origin = 0.0;          // integration origin (the result is recentred)
};

/// Phase-plane shooting from the interior maximum q(0) = q0, q'(0) = 0 in
/// both directions. Throws DomainError("no touchdown") when one side turns
/// back before reaching zero, or ("subsolution condition violated") when
/// edge_slope <= c.
CompactSubsolution shoot_compact_wave(const UProfile& f0, double m, double c, double q0,
                                      const ShootOptions& opts = {});

struct F0Options {
  double c = 0.05;
  double q0_fraction = 0.95;  // peak as a fraction of kappa0
  double initial_amplitude = 0.5;
  int max_halvings = 20;
  int x_samples = 256;
  int u_samples = 512;
};

/// A lower reaction profile satisfying f(x,u)(kappa(x)-u) >= f0(u).
struct F0Profile {
  F0Case kind = F0Case::monostable;
  double kappa0 = 1.0;
  double threshold = 0.0;  // theta1 / theta2; theta for the bistable construction
  double amplitude = 0.0;  // delta1 / delta2 (unused for bistable)
  UProfile f0;
  IntegralCheck integral;
  double domination_margin = 0.0;  // min of f(x,u)(kappa-u) - f0(u) over the sample grid
};

/// Explicit lower profiles. Throws DomainError("F3 not verifiable ...") when
/// the bistable integral gate fails (the message carries the u witness).
F0Profile build_f0(const Environment& env, F0Case kind, const F0Options& opts = {});

struct F2Report {
  bool pass = false;
  bool edge_ok = false;
  double min_value = 0.0;  // min of f(x,phi)(kappa-phi) - f0(phi) over the grid
  double witness_x = 0.0;
  double witness_z = 0.0;
};

/// Checks the subsolution inequality on an (x,z) product grid, using the ODE
/// to replace (phi^m)'' + c phi' by -f0(phi), plus the edge condition.
F2Report verify_F2(const Environment& env, const CompactSubsolution& sub, int n_x = 256, int n_z = 256);

}  // namespace sharpwave
