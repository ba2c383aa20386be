#pragma once

#include <string>
#include <vector>

#include "sharpwave/model.hpp"
#include "sharpwave/solver.hpp"
#include "sharpwave/stationary.hpp"

namespace sharpwave {

/// First times at which the front reaches each station, by linear
/// interpolation of b(t). Throws DomainError when a station is not reached
/// or lies behind the initial front.
std::vector<double> crossing_times(const FrontTrajectory& traj, const std::vector<double>& stations);

struct RenormConfig {
  long n_min = 2;
  long n_max = 16;
  double window_left = -6.0;
  double window_right = 2.0;
  int phases_per_unit = 32;
  double tol = 1e-3;
  int confirmations = 3;
};

/// One shifted profile v_n(., tau) restricted to the wave window.
struct WaveFrame {
  double tau = 0.0;  // time since t_n
  double b = 0.0;    // front in the wave frame, j / phases_per_unit
  std::vector<double> v;
};

/// Shifted snapshots v_n(x, tau) = v(x + n, tau + t_n), sampled at the
/// front phases n + j/J instead of fixed times.
struct RenormSequence {
  RenormConfig config;
  double dx = 0.0;
  long per = 0;        // nodes per period
  long window_lo = 0;  // relative node index of the window start
  std::vector<long> n;
  std::vector<double> t_n;  // one more entry than n
  std::vector<double> s_n;  // t_{n+1} - t_n
  FrontTrajectory trajectory;
  std::vector<std::vector<Snapshot>> frames;   // [k][j], unshifted full line
  std::vector<std::vector<WaveFrame>> window;  // [k][j], shifted to the window
  std::vector<double> convergence;    // sup |v_{n+1} - v_n| over the window, matched phases
  std::vector<double> time_mismatch;  // sup |tau_{n+1,j} - tau_{n,j}|
  double gap_monotonicity_violation = 0.0;  // max(0, s_n - s_{n+1})
  double decrease_violation = 0.0;          // max of v_{n+1}(x,0) - v_n(x,0) beyond the boundary layer
  double origin_value = 0.0;                // max_n v_n(0, 0)

  double window_x(std::size_t i) const { return static_cast<double>(window_lo + static_cast<long>(i)) * dx; }
  /// v_n at relative node `rel` and phase j over the whole recorded line.
  double value(std::size_t k, int j, long rel) const;
  /// Relative node range [lo, hi] recorded for frame (k, j); lo is the boundary node.
  std::pair<long, long> relative_range(std::size_t k, int j) const;
};

/// Requires phase snapshots (phases_per_unit matching the config) from
/// station n_min through n_max + 1 and a grid with an integer number of nodes
/// per period. Throws DomainError on insufficient recording.
RenormSequence extract_sequence(const SolveResult& run, const RenormConfig& cfg);

struct BoundaryTrace {
  std::vector<double> tau;
  std::vector<double> B;
  std::vector<double> Bprime;
};

struct WaveResult {
  bool converged = false;
  long n_converged = -1;  // first n opening the run of confirmations
  long n_last = 0;        // n whose frames define V
  double T = 0.0;
  double average_speed = 0.0;
  double delta_star = 0.0;
  double max_V = 0.0;
  double dx = 0.0;
  long per = 0;
  long window_lo = 0;
  int phases_per_unit = 0;
  std::vector<WaveFrame> V;
  BoundaryTrace boundary;
  std::vector<double> convergence_history;
  std::vector<double> s_n;
  std::vector<Snapshot> line;       // full-line frames of n_last, unshifted
  std::vector<Snapshot> next_line;  // and of n_last + 1

  double window_x(std::size_t i) const { return static_cast<double>(window_lo + static_cast<long>(i)) * dx; }
};

/// Declares convergence at the first run of `confirmations` consecutive
/// history entries <= tol and builds V from the last complete period.
/// Throws ConvergenceError (carrying the last history entry) when the
/// window never settles or s_n has not stabilised.
WaveResult extract_wave(const RenormSequence& seq, double tol);

struct TailMatch {
  std::string kind;
  double residual = 0.0;
};

struct VerifyOptions {
  double tail_tol = 1e-3;
  double darcy_tol = 0.05;
  double vt_tol = 1e-4;
  double periodic_rel = 1e-2;
};

struct WaveReport {
  bool positive = false;
  double min_interior = 0.0;  // min of V over nodes at least one cell behind the front
  double max_beyond = 0.0;    // max of V ahead of the front
  std::vector<TailMatch> tail;
  int best_tail = -1;
  double tail_residual = 0.0;
  bool tail_ok = false;
  double darcy_residual = 0.0;  // max relative |B' + V_x(B-0)|
  bool darcy_ok = false;
  double min_Vt = 0.0;
  bool monotone_ok = false;
  double periodicity_defect = 0.0;
  bool periodic_ok = false;
  double gradient_bound = 0.0;  // C1 with V <= C1 (B - x) on [B-1, B]
  double lower_profile_min = 0.0;  // min over the period and s in [0.25, 6] of V(B - s)
  bool pass = false;
};

/// Checks positivity, the left tail against the candidate steady states, the
/// Darcy law, monotonicity in time and periodicity of an extracted wave.
WaveReport verify_wave(const Environment& env, const WaveResult& wave,
                       const std::vector<PeriodicSteadyState>& candidates, const VerifyOptions& opts = {});

struct LinftyReport {
  std::vector<long> n;
  std::vector<double> gap;  // whole-line sup over matched phases of |v_n - V|
  double max_V = 0.0;
  double threshold = 0.0;
  long check_n = 12;
  double gap_at_check = 0.0;
  bool decreasing = false;
  bool pass = false;
};

/// Whole-line comparison of v_n with V for n < n_last, skipping the period
/// next to the clamped left boundary. Passes iff the gap is
/// nonincreasing (up to the convergence tolerance) and below rel * max V at check_n.
LinftyReport check_linfty(const RenormSequence& seq, const WaveResult& wave, long check_n = 12, double rel = 1e-2);

}  // namespace sharpwave
