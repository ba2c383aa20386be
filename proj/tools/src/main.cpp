#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sharpwave/error.hpp"
#include "sharpwave/version.hpp"
#include "sharpwave_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace sharpwave::cli;
  CLI::App app{"Sharp periodic travelling waves of reaction porous-media equations"};
  app.set_version_flag("--version", sharpwave::kVersion);
  app.require_subcommand(1);

  std::string config;
  std::string dx;
  long n_max = 0;
  double tol = 0.0;
  std::string out;
  int jobs = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the standing hypotheses and build a compact subsolution"},
      {"steady", "minimal and maximal periodic steady states"},
      {"subsolution", "lower reaction profile and compact travelling-wave subsolution"},
      {"simulate", "Heaviside run with time snapshots"},
      {"wave", "extract and verify the periodic sharp wave"},
      {"diagnose", "sign changes between two runs"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "run config or bare environment (JSON)")->required();
    sub->add_option("--dx", dx, "grid spacing, e.g. 1/256");
    sub->add_option("--n-max", n_max, "last renormalisation station")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "renormalisation tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "artifact root directory (default out)");
    sub->add_option("--jobs", jobs, "parallel independent runs (default $SHARPWAVE_JOBS or 1)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  Overrides ov;
  try {
    if (!dx.empty()) ov.dx = parse_grid_spacing(dx);
  } catch (const sharpwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }
  if (n_max > 0) ov.n_max = n_max;
  if (tol > 0.0) ov.tol = tol;
  if (!out.empty()) ov.out = out;
  if (jobs > 0) ov.jobs = jobs;

  const std::string command = app.get_subcommands().front()->get_name();
  return dispatch(command, config, ov, std::cout, std::cerr);
}
