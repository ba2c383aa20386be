#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "sharpwave/model.hpp"
#include "sharpwave/stationary.hpp"

namespace sharpwave {

/// Pressure samples on the uniform grid x_i = (first_index + i) * dx, with a
/// sub-grid right free boundary b. Nodes beyond b carry zero.
struct Field {
  double dx = 1.0 / 256;
  long first_index = 0;
  std::vector<double> v;
  double b = 0.0;
  double t = 0.0;

  std::size_t size() const noexcept { return v.size(); }
  double x(std::size_t i) const noexcept { return static_cast<double>(first_index + static_cast<long>(i)) * dx; }
  double x_left() const noexcept { return x(0); }
  double x_right() const noexcept { return x(v.size() - 1); }
  /// Linear interpolation in x; zero outside the window on the right, the
  /// boundary value on the left.
  double value_at(double x) const;
  double max_value() const;
};

enum class LeftBoundary {
  dirichlet,  // clamp to a prescribed (steady) pressure at x_left; window trails the front
  reflect,    // symmetry axis at x_left (two-sided compact supports)
};

struct SolverConfig {
  double dx = 1.0 / 256;
  double cfl = 0.5;           // sigma in (0, 0.9]
  int slope_order = 2;        // one-sided front slope stencil: 1 or 2
  LeftBoundary left = LeftBoundary::dirichlet;
  /// Pressure imposed at x_left in dirichlet mode; if empty, the current
  /// boundary value is held.
  std::function<double(double)> left_value;
  double right_padding = 1.0;  // keep x_right >= b + right_padding
  double left_margin = 18.0;   // dirichlet mode: x_left follows floor(b) - left_margin
  double dt_max = 0.05;
  int startup_steps = 100;     // steps taken with cfl / 4
  long max_steps = 20'000'000;

  /// Throws ConfigError when an invariant (cfl <= 0.9, dx > 0, padding >= 10 dx) fails.
  void validate() const;
};

/// Time series of the front.
struct FrontTrajectory {
  std::vector<double> t;
  std::vector<double> b;
  std::vector<double> slope;  // -v_x(b - 0, t)
  std::vector<double> speed;  // b'(t) used by the integrator

  void push(double t_, double b_, double slope_, double speed_) {
    t.push_back(t_);
    b.push_back(b_);
    slope.push_back(slope_);
    speed.push_back(speed_);
  }
  std::size_t size() const noexcept { return t.size(); }
};

/// A recorded state; `tag` is the time for time snapshots and the front
/// station for phase snapshots.
struct Snapshot {
  double t = 0.0;
  double b = 0.0;
  double tag = 0.0;
  long first_index = 0;
  double dx = 0.0;
  std::vector<double> v;

  double x(std::size_t i) const noexcept { return static_cast<double>(first_index + static_cast<long>(i)) * dx; }
  /// Value at global node index, zero beyond the right end, boundary value before the left end.
  double at_index(long global) const;
};

/// Initial pressure q2(x) H(k - x) on [x_left, x_right].
Field init_heaviside(const PeriodicSteadyState& q2, double k, double x_left, double x_right, double dx);
/// Same, with an arbitrary left profile (used for randomised comparison pairs).
Field init_step(const std::function<double(double)>& profile, double k, double x_left, double x_right, double dx);

/// -v_x(b - 0) from the one-sided stencil through the last active nodes and
/// the zero at b. Throws DomainError when fewer than one active node exists.
double front_speed(const Field& field, const SolverConfig& cfg);

struct StepInfo {
  double dt = 0.0;
  double speed = 0.0;
  double slope = 0.0;
  double clipped_mass = 0.0;
};

/// Single-run integrator for v_t = (m-1) v v_xx + v_x^2 + g(x,v) with the
/// Darcy front b' = -v_x(b-0). The degenerate diffusion is treated linearly
/// implicitly, the gradient term by a monotone Godunov flux and the reaction
/// explicitly; the front is advanced first and bounds the implicit solve.
class Stepper {
 public:
  Stepper(const Environment& env, SolverConfig cfg);

  /// Advances `field` by one step no longer than `dt_limit`.
  StepInfo step(Field& field, double dt_limit = std::numeric_limits<double>::infinity());

  const SolverConfig& config() const noexcept { return cfg_; }
  long steps_taken() const noexcept { return steps_; }
  double reaction_rate_bound() const noexcept { return rate_bound_; }

  /// Extends the window on the right and, in dirichlet mode, drops one
  /// period on the left each time the front passes an integer.
  void maintain_window(Field& field) const;

 private:
  double pressure_reaction(const Field& f, std::size_t i, double v) const;

  const Environment* env_;
  SolverConfig cfg_;
  long per_ = 0;  // nodes per period when the grid divides it, else 0
  std::vector<double> kappa_tab_, mod_tab_;
  double rate_bound_ = 0.0;
  long steps_ = 0;
  std::vector<double> lower_, diag_, upper_, rhs_;
};

/// Free-function form of a single step.
Field step(const Environment& env, const Field& field, const SolverConfig& cfg);

struct StopCondition {
  double t_end = std::numeric_limits<double>::infinity();
  std::optional<double> front_station;  // stop once b >= station
  /// Optional predicate checked after every step.
  std::function<bool(const Field&)> predicate;
};

struct RecorderSpec {
  double snapshot_interval = 0.0;  // time snapshots; 0 disables
  int phases_per_unit = 0;         // snapshots when b crosses j / phases_per_unit; 0 disables
  double phase_from = 0.0;         // first station recorded
  int trajectory_stride = 1;
};

struct SolveResult {
  Field field;
  FrontTrajectory trajectory;
  std::vector<Snapshot> snapshots;        // tagged by time
  std::vector<Snapshot> phase_snapshots;  // tagged by front station
  long steps = 0;
  double clipped_mass = 0.0;
  bool reached_stop = false;  // false when the step budget ran out (only with allow_budget_exit)
};

/// Runs `step` until the stop condition. Throws NumericalAbort on
/// non-finite values, large undershoot or an exhausted step budget.
SolveResult solve(const Environment& env, Field field, const StopCondition& until, const SolverConfig& cfg,
                  const RecorderSpec& recorder = {});

/// Parameters of the Barenblatt-type supersolution.
struct SupersolutionParams {
  double delta_star = 0.01;
  double K = 1.0;
  double x0 = 0.0;
};

/// ((m-1)/(4m))^(1/(m-1)).
double supersolution_amplitude(double m);
/// rho(t) = delta^(1/2) (t+1)^(1/2) exp((m-1) K (t+1) / 2): half-width of the support.
double supersolution_radius(const SupersolutionParams& p, double m, double t);
/// Whether 2 rho(3T) < 1, the admissibility condition for the period bound T.
bool supersolution_admissible(const SupersolutionParams& p, double m, double period_bound);
/// Density of the supersolution at (x, t).
double barenblatt_supersolution(const SupersolutionParams& p, double m, double x, double t);

/// Zel'dovich-Kompaneets-Barenblatt source solution of u_t = (u^m)_xx:
/// u = t^-k (C - k (m-1) x^2 / (2 m t^(2k)))_+^(1/(m-1)), k = 1/(m+1).
double zkb_density(double m, double C, double x, double t);
/// Its right front sqrt(2 m C / (k (m-1))) t^k.
double zkb_front(double m, double C, double t);

}  // namespace sharpwave
