#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sharpwave/error.hpp"
#include "sharpwave_cli/artifacts.hpp"
#include "sharpwave_cli/commands.hpp"
#include "sharpwave_cli/config.hpp"
#include "support.hpp"

using namespace sharpwave;
using namespace sharpwave::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = SHARPWAVE_FIXTURES;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sharpwave-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SHARPWAVE_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json fixture(const std::string& name) { return json::parse(slurp(kFixtures / (name + ".json"))); }

}  // namespace

TEST(Artifacts, FnvKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

TEST(Artifacts, NumberFormat) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(0.0), "0");
}

TEST(Artifacts, CsvRows) {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "a.csv", {"x", "y"});
    w.row({1.0, 0.25});
    w.row(std::vector<std::string>{"2", "label"});
    w.close();
  }
  EXPECT_EQ(slurp(dir / "a.csv"), "x,y\n1,0.25\n2,label\n");
}

TEST(Config, GridSpacing) {
  EXPECT_DOUBLE_EQ(parse_grid_spacing("1/256"), 1.0 / 256);
  EXPECT_DOUBLE_EQ(parse_grid_spacing("0.0078125"), 1.0 / 128);
  EXPECT_THROW(parse_grid_spacing("1/0"), ConfigError);
  EXPECT_THROW(parse_grid_spacing("abc"), ConfigError);
  EXPECT_THROW(parse_grid_spacing("-0.1"), ConfigError);
}

TEST(Config, EnvironmentRoundTrip) {
  for (const char* name : {"fisher", "periodic_monostable", "combustion03", "bistable025", "multistable_terrace"}) {
    const Environment env = environment_from_json(fixture(name)["environment"]);
    const json again = environment_to_json(env);
    EXPECT_EQ(environment_to_json(environment_from_json(again)), again) << name;
    const Environment back = environment_from_json(again);
    for (double x : {0.0, 0.3, 0.77})
      for (double u : {0.0, 0.2, 0.9}) {
        EXPECT_DOUBLE_EQ(back.kappa_at(x), env.kappa_at(x));
        EXPECT_DOUBLE_EQ(back.f(x, u), env.f(x, u));
      }
  }
}

TEST(Config, UnknownKeysRejected) {
  json j = fixture("fisher");
  j["environment"]["kappa"]["meen"] = 1.0;
  EXPECT_THROW(run_config_from_json(j), ConfigError);
  j = fixture("fisher");
  j["solvr"] = json::object();
  EXPECT_THROW(run_config_from_json(j), ConfigError);
}

TEST(Config, InvalidValuesRejected) {
  json j = fixture("fisher");
  j["environment"]["m"] = 1.0;
  EXPECT_THROW(run_config_from_json(j), ConfigError);
  j = fixture("fisher");
  j["renorm"]["n_max"] = 1;
  EXPECT_THROW(run_config_from_json(j), ConfigError);
  j = fixture("fisher");
  j["renorm"]["window"] = json::array({-30, 2});
  EXPECT_THROW(run_config_from_json(j), ConfigError);
}

TEST(Config, BareEnvironmentAndOverrides) {
  Overrides ov;
  ov.dx = 1.0 / 64;
  ov.n_max = 9;
  ov.tol = 2e-3;
  ov.jobs = 3;
  const RunConfig c = run_config_from_json(fixture("fisher")["environment"], ov);
  EXPECT_DOUBLE_EQ(c.solver.dx, 1.0 / 64);
  EXPECT_EQ(c.renorm.n_max, 9);
  EXPECT_DOUBLE_EQ(c.renorm.tol, 2e-3);
  EXPECT_EQ(c.jobs, 3);
  EXPECT_DOUBLE_EQ(c.env().m(), 2.0);
}

TEST(Config, DefaultCase) {
  EXPECT_EQ(default_f0_case(ReactionFamily::monostable), F0Case::monostable);
  EXPECT_EQ(default_f0_case(ReactionFamily::combustion), F0Case::combustion);
  EXPECT_EQ(default_f0_case(ReactionFamily::bistable), F0Case::bistable);
}

TEST(Pipeline, SteadyStatesCoincide) {
  const RunConfig c = run_config_from_json(fixture("fisher"));
  const SteadyPair s = compute_steady_pair(c.env(), c.steady, 2);
  EXPECT_TRUE(steady_states_coincide(s, 1e-6));
}

TEST(Binary, ExitCodes) {
  const fs::path out = scratch("exit");
  const std::string o = " --out " + out.string();
  EXPECT_EQ(run_binary("validate --config " + (kFixtures / "fisher.json").string() + o), 0);
  EXPECT_EQ(run_binary("validate --config " + (kFixtures / "bad_kappa.json").string() + o), 1);
  EXPECT_EQ(run_binary("validate --config " + (out / "missing.json").string() + o), 2);
  EXPECT_EQ(run_binary("validate" + o), 2);
  write_text(out / "broken.json", "{\"m\": 2.0,");
  EXPECT_EQ(run_binary("validate --config " + (out / "broken.json").string() + o), 2);
  EXPECT_EQ(run_binary("steady --config " + (kFixtures / "fisher.json").string() + " --dx 0" + o), 2);
}

TEST(Binary, SteadyArtifacts) {
  const fs::path out = scratch("steady");
  ASSERT_EQ(run_binary("steady --config " + (kFixtures / "fisher.json").string() + " --dx 1/64 --out " + out.string()),
            0);
  const fs::path dir = out / "fisher-steady";
  ASSERT_TRUE(fs::exists(dir / "manifest.json"));
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "steady");
  EXPECT_TRUE(manifest.contains("config_hash"));
  EXPECT_TRUE(manifest.contains("grid"));
  std::ifstream csv(dir / "steady_p1.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x,p,q");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string x, p;
    std::getline(ss, x, ',');
    std::getline(ss, p, ',');
    EXPECT_NEAR(std::stod(p), 1.0, 1e-6) << line;
    ++rows;
  }
  const RunConfig c = load_run_config(kFixtures / "fisher.json");
  EXPECT_EQ(rows, c.steady.n_period);
}

TEST(Binary, SubsolutionArtifacts) {
  const fs::path out = scratch("sub");
  ASSERT_EQ(run_binary("subsolution --config " + (kFixtures / "fisher.json").string() + " --out " + out.string()), 0);
  const json summary = json::parse(slurp(out / "fisher-subsolution" / "summary.json"));
  EXPECT_EQ(summary["F2"]["pass"], true);
  EXPECT_TRUE(fs::exists(out / "fisher-subsolution" / "subsolution.csv"));
}

TEST(Binary, WaveOnFisher) {
  const fs::path out = scratch("wave");
  ASSERT_EQ(run_binary("wave --config " + (kFixtures / "fisher.json").string() + " --dx 1/128 --out " + out.string()),
            0);
  const fs::path dir = out / "fisher-wave";
  const json summary = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["status"], "converged");
  EXPECT_NEAR(summary["wave"]["T"].get<double>(), 1.0, 0.02);
  for (const char* f : {"profile.csv", "boundary.csv", "convergence.csv", "trajectory.csv", "linfty.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
}

TEST(Binary, TerraceExitsThree) {
  const fs::path out = scratch("terrace");
  EXPECT_EQ(run_binary("wave --config " + (kFixtures / "multistable_terrace.json").string() +
                       " --dx 1/64 --out " + out.string()),
            3);
}

TEST(Binary, ArtifactsAreDeterministic) {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  const std::string cfg = (kFixtures / "periodic_monostable.json").string();
  for (const char* cmd : {"steady", "diagnose"}) {
    ASSERT_EQ(run_binary(std::string(cmd) + " --config " + cfg + " --dx 1/64 --jobs 1 --out " + a.string()), 0);
    ASSERT_EQ(run_binary(std::string(cmd) + " --config " + cfg + " --dx 1/64 --jobs 2 --out " + b.string()), 0);
  }
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path other = b / fs::relative(e.path(), a);
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path();
    ++files;
  }
  EXPECT_GE(files, 6);
}
