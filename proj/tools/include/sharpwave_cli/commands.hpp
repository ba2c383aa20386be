#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "sharpwave/diagnostics.hpp"
#include "sharpwave/renorm.hpp"
#include "sharpwave_cli/config.hpp"

namespace sharpwave::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_domain = 1,
  exit_config = 2,
  exit_nonconvergence = 3,
  exit_abort = 4,
};

struct SteadyPair {
  PeriodicSteadyState p1, p2;
};

/// Minimal and maximal steady states, computed concurrently when jobs > 1.
SteadyPair compute_steady_pair(const Environment& env, const SteadyOptions& opts, int jobs);

/// Solver settings for a Heaviside run clamped to the steady pressure `q`.
SolverConfig clamped_solver(const SolverConfig& base, const PeriodicSteadyState& q);

enum class WaveStatus { converged, no_convergence, terrace_suspected };
std::string to_string(WaveStatus s);

struct WavePipeline {
  SteadyPair steady;
  SolveResult run;  // Heaviside data at the height of p2
  RenormSequence sequence;
  /// Separate run from p1 for the L-infinity check, when p1 and p2 differ.
  std::optional<RenormSequence> lower_sequence;
  WaveStatus status = WaveStatus::no_convergence;
  std::string message;
  std::optional<WaveResult> wave;
  std::optional<WaveReport> report;
  std::optional<LinftyReport> linfty;
  bool pass = false;  // converged, L-infinity check and every verification passed
};

/// Whether p1 and p2 agree to the steady tolerance (pressure sup norm).
bool steady_states_coincide(const SteadyPair& s, double tol);

/// Steady states, Heaviside run, renormalisation, extraction, verification.
/// Throws NumericalAbort from the solver and DomainError from the setup.
WavePipeline run_wave_pipeline(const RunConfig& cfg);

/// Two runs from ordered-or-crossing Heaviside data, compared at common times.
struct DiagnoseResult {
  SolveResult run1, run2;
  IntersectionReport report;
  double front_tol = 0.0;
};
DiagnoseResult run_diagnose(const RunConfig& cfg, const SteadyPair& steady);

int cmd_validate(const RunConfig& cfg, std::ostream& log);
int cmd_steady(const RunConfig& cfg, std::ostream& log);
int cmd_subsolution(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_wave(const RunConfig& cfg, std::ostream& log);
int cmd_diagnose(const RunConfig& cfg, std::ostream& log);

/// Loads the config and runs the named subcommand, mapping library errors
/// onto exit codes. Messages go to `err`.
int dispatch(const std::string& command, const std::string& config_path, const Overrides& overrides,
             std::ostream& log, std::ostream& err);

}  // namespace sharpwave::cli
