#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sharpwave/model.hpp"
#include "sharpwave/phaseplane.hpp"
#include "sharpwave/renorm.hpp"
#include "sharpwave/solver.hpp"
#include "sharpwave/stationary.hpp"

namespace sharpwave::cli {

nlohmann::json environment_to_json(const Environment& env);
/// Throws ConfigError on missing or mistyped fields, DomainError when the
/// data is well formed but mathematically invalid.
Environment environment_from_json(const nlohmann::json& j);

struct SimulateOptions {
  double t_end = 5.0;
  double snapshot_interval = 0.5;
  double start = 0.0;  // Heaviside jump position
  double window_right = 2.0;
};

struct DiagnoseOptions {
  double t_end = 6.0;
  double snapshot_interval = 0.25;
  double shift = 0.5;     // second run: Heaviside moved right by `shift`
  double height = 0.6;    // and scaled to this fraction of q2
  double tol = 1e-9;
};

struct WaveOptions {
  long check_n = 12;
  double linfty_rel = 1e-2;
  VerifyOptions verify;
};

struct SubsolutionOptions {
  bool check = true;  // validate: also construct and verify a subsolution
  std::optional<F0Case> kind;  // defaults from the reaction family
  F0Options f0;
};

struct RunConfig {
  std::string name = "run";
  nlohmann::json source;  // the parsed file after overrides, hashed into the manifest
  std::optional<Environment> environment;
  SolverConfig solver;
  RenormConfig renorm;
  SteadyOptions steady;
  SubsolutionOptions subsolution;
  SimulateOptions simulate;
  DiagnoseOptions diagnose;
  WaveOptions wave;
  std::filesystem::path out = "out";
  int jobs = 1;

  const Environment& env() const { return *environment; }
};

struct Overrides {
  std::optional<double> dx;
  std::optional<long> n_max;
  std::optional<double> tol;
  std::optional<std::string> out;
  std::optional<int> jobs;
};

/// Accepts "0.0039", "1/256".
double parse_grid_spacing(const std::string& text);

/// A run config {"name", "environment", "solver", "renorm", ...} or a bare
/// environment object.
RunConfig run_config_from_json(nlohmann::json j, const Overrides& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// F0Case matching the reaction family, if there is one.
std::optional<F0Case> default_f0_case(ReactionFamily family);

}  // namespace sharpwave::cli
