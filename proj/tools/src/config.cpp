#include "sharpwave_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <limits>

#include "sharpwave/error.hpp"

namespace sharpwave::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

template <class T>
void read_opt(const json& j, const char* key, T& into, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  } else {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  }
  into = v.get<T>();
}

void require_positive(double value, const std::string& what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(what + " must be positive");
}

json coefficient_to_json(const PeriodicCoefficient& c) {
  json h = json::array();
  for (const auto& t : c.harmonics()) h.push_back({{"amp", t.amp}, {"freq", t.freq}, {"phase", t.phase}});
  return {{"mean", c.mean()}, {"harmonics", h}};
}

PeriodicCoefficient coefficient_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return PeriodicCoefficient(j.get<double>());
  require_object(j, where);
  reject_unknown(j, where, {"mean", "harmonics"});
  const double mean = number(j, "mean", where);
  std::vector<Harmonic> hs;
  if (j.contains("harmonics")) {
    if (!j.at("harmonics").is_array()) throw ConfigError(where + ".harmonics: expected an array");
    for (const auto& h : j.at("harmonics")) {
      require_object(h, where + ".harmonics[]");
      reject_unknown(h, where + ".harmonics[]", {"amp", "freq", "phase"});
      Harmonic t;
      t.amp = number(h, "amp", where + ".harmonics[]");
      read_opt(h, "freq", t.freq, where + ".harmonics[]");
      read_opt(h, "phase", t.phase, where + ".harmonics[]");
      if (t.freq < 1) throw ConfigError(where + ".harmonics[].freq must be a positive integer");
      hs.push_back(t);
    }
  }
  return PeriodicCoefficient(mean, std::move(hs));
}

}  // namespace

json environment_to_json(const Environment& env) {
  const ReactionSpec& r = env.reaction();
  json pieces = json::array();
  for (const auto& p : r.base.pieces()) {
    json piece = {{"from", p.from}, {"coeffs", p.coeffs}};
    piece["to"] = std::isfinite(p.to) ? json(p.to) : json(nullptr);
    pieces.push_back(piece);
  }
  json reaction = {{"family", to_string(r.family)},
                   {"base_pieces", pieces},
                   {"modulation", coefficient_to_json(r.modulation)}};
  if (r.theta) reaction["theta"] = *r.theta;
  if (!r.sign_changes.empty()) reaction["sign_changes"] = r.sign_changes;
  return {{"m", env.m()}, {"kappa", coefficient_to_json(env.kappa())}, {"reaction", reaction}};
}

Environment environment_from_json(const json& j) {
  require_object(j, "environment");
  reject_unknown(j, "environment", {"m", "kappa", "reaction"});
  const double m = number(j, "m", "environment");
  if (!j.contains("kappa")) throw ConfigError("environment: missing \"kappa\"");
  if (!j.contains("reaction")) throw ConfigError("environment: missing \"reaction\"");
  PeriodicCoefficient kappa = coefficient_from_json(j.at("kappa"), "environment.kappa");

  const json& rj = j.at("reaction");
  require_object(rj, "reaction");
  reject_unknown(rj, "reaction", {"family", "theta", "base_pieces", "modulation", "sign_changes"});
  ReactionSpec r;
  if (!rj.contains("family") || !rj.at("family").is_string()) throw ConfigError("reaction: missing \"family\"");
  try {
    r.family = reaction_family_from_string(rj.at("family").get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(std::string("reaction.family: ") + e.what());
  }
  if (rj.contains("theta")) r.theta = number(rj, "theta", "reaction");
  if (rj.contains("sign_changes")) {
    if (!rj.at("sign_changes").is_array()) throw ConfigError("reaction.sign_changes: expected an array");
    for (const auto& s : rj.at("sign_changes")) {
      if (!s.is_number()) throw ConfigError("reaction.sign_changes: expected numbers");
      r.sign_changes.push_back(s.get<double>());
    }
  }
  if (!rj.contains("base_pieces") || !rj.at("base_pieces").is_array() || rj.at("base_pieces").empty())
    throw ConfigError("reaction: \"base_pieces\" must be a non-empty array");
  std::vector<PolyPiece> pieces;
  for (const auto& pj : rj.at("base_pieces")) {
    require_object(pj, "reaction.base_pieces[]");
    reject_unknown(pj, "reaction.base_pieces[]", {"from", "to", "coeffs"});
    PolyPiece p;
    p.from = number(pj, "from", "reaction.base_pieces[]");
    if (pj.contains("to") && !pj.at("to").is_null()) p.to = number(pj, "to", "reaction.base_pieces[]");
    else p.to = std::numeric_limits<double>::infinity();
    if (!pj.contains("coeffs") || !pj.at("coeffs").is_array())
      throw ConfigError("reaction.base_pieces[].coeffs: expected an array");
    for (const auto& c : pj.at("coeffs")) {
      if (!c.is_number()) throw ConfigError("reaction.base_pieces[].coeffs: expected numbers");
      p.coeffs.push_back(c.get<double>());
    }
    pieces.push_back(std::move(p));
  }
  try {
    r.base = PiecewisePolynomial(std::move(pieces));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("reaction.base_pieces: ") + e.what());
  }
  if (rj.contains("modulation")) r.modulation = coefficient_from_json(rj.at("modulation"), "reaction.modulation");
  try {
    return Environment(m, std::move(kappa), std::move(r));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  }
}

double parse_grid_spacing(const std::string& text) {
  const auto slash = text.find('/');
  char* end = nullptr;
  double value = 0.0;
  if (slash == std::string::npos) {
    value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') throw ConfigError("dx: cannot parse \"" + text + "\"");
  } else {
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    const double num = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end != '\0') throw ConfigError("dx: cannot parse \"" + text + "\"");
    const double den = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || *end != '\0' || den == 0.0) throw ConfigError("dx: cannot parse \"" + text + "\"");
    value = num / den;
  }
  require_positive(value, "dx");
  return value;
}

std::optional<F0Case> default_f0_case(ReactionFamily family) {
  switch (family) {
    case ReactionFamily::monostable: return F0Case::monostable;
    case ReactionFamily::combustion: return F0Case::combustion;
    case ReactionFamily::bistable: return F0Case::bistable;
    default: return std::nullopt;
  }
}

namespace {

F0Case f0_case_from_string(const std::string& s) {
  if (s == "monostable") return F0Case::monostable;
  if (s == "combustion") return F0Case::combustion;
  if (s == "bistable") return F0Case::bistable;
  throw ConfigError("subsolution.case: unknown case \"" + s + "\"");
}

void read_solver(const json& j, SolverConfig& s) {
  const std::string w = "solver";
  require_object(j, w);
  reject_unknown(j, w, {"dx", "cfl", "slope_order", "left_margin", "right_padding", "dt_max", "startup_steps", "max_steps"});
  if (j.contains("dx")) {
    if (j.at("dx").is_string()) s.dx = parse_grid_spacing(j.at("dx").get<std::string>());
    else s.dx = number(j, "dx", w);
  }
  read_opt(j, "cfl", s.cfl, w);
  read_opt(j, "slope_order", s.slope_order, w);
  read_opt(j, "left_margin", s.left_margin, w);
  read_opt(j, "right_padding", s.right_padding, w);
  read_opt(j, "dt_max", s.dt_max, w);
  read_opt(j, "startup_steps", s.startup_steps, w);
  read_opt(j, "max_steps", s.max_steps, w);
}

void read_renorm(const json& j, RenormConfig& r) {
  const std::string w = "renorm";
  require_object(j, w);
  reject_unknown(j, w, {"n_min", "n_max", "window", "phases_per_unit", "tol", "confirmations"});
  read_opt(j, "n_min", r.n_min, w);
  read_opt(j, "n_max", r.n_max, w);
  if (j.contains("window")) {
    const json& win = j.at("window");
    if (!win.is_array() || win.size() != 2 || !win[0].is_number() || !win[1].is_number())
      throw ConfigError("renorm.window: expected [left, right]");
    r.window_left = win[0].get<double>();
    r.window_right = win[1].get<double>();
  }
  read_opt(j, "phases_per_unit", r.phases_per_unit, w);
  read_opt(j, "tol", r.tol, w);
  read_opt(j, "confirmations", r.confirmations, w);
}

void check(const RunConfig& c) {
  c.solver.validate();
  if (std::abs(c.solver.left_margin) < 2.0) throw ConfigError("solver.left_margin must be at least 2");
  if (c.renorm.n_min < 1 || c.renorm.n_max <= c.renorm.n_min + 1)
    throw ConfigError("renorm: need 1 <= n_min and n_max > n_min + 1");
  if (!(c.renorm.window_left < 0.0 && c.renorm.window_right > 0.0))
    throw ConfigError("renorm.window must straddle 0");
  if (c.renorm.window_left <= -c.solver.left_margin + 1.0)
    throw ConfigError("renorm.window reaches into the clamped boundary layer");
  if (c.renorm.phases_per_unit < 2) throw ConfigError("renorm.phases_per_unit must be at least 2");
  if (c.renorm.confirmations < 1) throw ConfigError("renorm.confirmations must be at least 1");
  require_positive(c.renorm.tol, "renorm.tol");
  require_positive(c.steady.tol, "steady.tol");
  if (c.steady.n_period < 8) throw ConfigError("steady.n_period must be at least 8");
  require_positive(c.simulate.t_end, "simulate.t_end");
  if (c.simulate.snapshot_interval < 0.0) throw ConfigError("simulate.snapshot_interval must be non-negative");
  require_positive(c.diagnose.t_end, "diagnose.t_end");
  require_positive(c.diagnose.snapshot_interval, "diagnose.snapshot_interval");
  require_positive(c.diagnose.height, "diagnose.height");
  require_positive(c.diagnose.tol, "diagnose.tol");
  require_positive(c.wave.linfty_rel, "wave.linfty_rel");
  require_positive(c.wave.verify.tail_tol, "wave.tail_tol");
  require_positive(c.wave.verify.darcy_tol, "wave.darcy_tol");
  require_positive(c.wave.verify.vt_tol, "wave.vt_tol");
  require_positive(c.wave.verify.periodic_rel, "wave.periodic_rel");
  require_positive(c.subsolution.f0.c, "subsolution.c");
  if (!(c.subsolution.f0.q0_fraction > 0.0 && c.subsolution.f0.q0_fraction < 1.0))
    throw ConfigError("subsolution.q0_fraction must lie in (0, 1)");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
}

}  // namespace

RunConfig run_config_from_json(json j, const Overrides& ov) {
  require_object(j, "config");
  if (!j.contains("environment")) j = json{{"environment", j}};
  reject_unknown(j, "config",
                 {"name", "environment", "solver", "renorm", "steady", "subsolution", "simulate", "diagnose", "wave"});

  if (ov.dx) j["solver"]["dx"] = *ov.dx;
  if (ov.n_max) j["renorm"]["n_max"] = *ov.n_max;
  if (ov.tol) j["renorm"]["tol"] = *ov.tol;

  RunConfig c;
  read_opt(j, "name", c.name, "config");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos || c.name == "." || c.name == "..")
    throw ConfigError("config.name must be a plain directory name");
  c.environment.emplace(environment_from_json(j.at("environment")));

  if (j.contains("solver")) read_solver(j.at("solver"), c.solver);
  if (j.contains("renorm")) read_renorm(j.at("renorm"), c.renorm);
  if (j.contains("steady")) {
    const json& s = j.at("steady");
    require_object(s, "steady");
    reject_unknown(s, "steady", {"n_period", "tol", "max_steps", "require_f1"});
    read_opt(s, "n_period", c.steady.n_period, "steady");
    read_opt(s, "tol", c.steady.tol, "steady");
    read_opt(s, "max_steps", c.steady.max_steps, "steady");
    read_opt(s, "require_f1", c.steady.require_f1, "steady");
  }
  if (j.contains("subsolution")) {
    const json& s = j.at("subsolution");
    require_object(s, "subsolution");
    reject_unknown(s, "subsolution", {"check", "case", "c", "q0_fraction", "initial_amplitude"});
    read_opt(s, "check", c.subsolution.check, "subsolution");
    if (s.contains("case")) {
      std::string k;
      read_opt(s, "case", k, "subsolution");
      c.subsolution.kind = f0_case_from_string(k);
    }
    read_opt(s, "c", c.subsolution.f0.c, "subsolution");
    read_opt(s, "q0_fraction", c.subsolution.f0.q0_fraction, "subsolution");
    read_opt(s, "initial_amplitude", c.subsolution.f0.initial_amplitude, "subsolution");
  }
  if (!c.subsolution.kind) c.subsolution.kind = default_f0_case(c.env().family());
  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    require_object(s, "simulate");
    reject_unknown(s, "simulate", {"t_end", "snapshot_interval", "start", "window_right"});
    read_opt(s, "t_end", c.simulate.t_end, "simulate");
    read_opt(s, "snapshot_interval", c.simulate.snapshot_interval, "simulate");
    read_opt(s, "start", c.simulate.start, "simulate");
    read_opt(s, "window_right", c.simulate.window_right, "simulate");
  }
  if (j.contains("diagnose")) {
    const json& s = j.at("diagnose");
    require_object(s, "diagnose");
    reject_unknown(s, "diagnose", {"t_end", "snapshot_interval", "shift", "height", "tol"});
    read_opt(s, "t_end", c.diagnose.t_end, "diagnose");
    read_opt(s, "snapshot_interval", c.diagnose.snapshot_interval, "diagnose");
    read_opt(s, "shift", c.diagnose.shift, "diagnose");
    read_opt(s, "height", c.diagnose.height, "diagnose");
    read_opt(s, "tol", c.diagnose.tol, "diagnose");
  }
  if (j.contains("wave")) {
    const json& s = j.at("wave");
    require_object(s, "wave");
    reject_unknown(s, "wave", {"check_n", "linfty_rel", "tail_tol", "darcy_tol", "vt_tol", "periodic_rel"});
    read_opt(s, "check_n", c.wave.check_n, "wave");
    read_opt(s, "linfty_rel", c.wave.linfty_rel, "wave");
    read_opt(s, "tail_tol", c.wave.verify.tail_tol, "wave");
    read_opt(s, "darcy_tol", c.wave.verify.darcy_tol, "wave");
    read_opt(s, "vt_tol", c.wave.verify.vt_tol, "wave");
    read_opt(s, "periodic_rel", c.wave.verify.periodic_rel, "wave");
  }
  if (ov.out) c.out = *ov.out;
  if (ov.jobs) c.jobs = *ov.jobs;
  else if (const char* env = std::getenv("SHARPWAVE_JOBS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("SHARPWAVE_JOBS: expected an integer");
    c.jobs = static_cast<int>(n);
  }
  c.source = std::move(j);
  check(c);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(std::move(j), ov);
}

}  // namespace sharpwave::cli
