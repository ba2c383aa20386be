#include "sharpwave/solver.hpp"

#include <algorithm>
#include <cmath>

#include "sharpwave/error.hpp"
#include "sharpwave/tridiagonal.hpp"

namespace sharpwave {

namespace {

constexpr double kUndershoot = 1e-12;

// Index of the last node with x_i <= b - dx/2, or -1.
long last_active(const Field& f) {
  const double s = (f.b - 0.5 * f.dx) / f.dx - static_cast<double>(f.first_index);
  const double fl = std::floor(s + 1e-9);
  if (fl < 0.0) return -1;
  return std::min(static_cast<long>(fl), static_cast<long>(f.size()) - 1);
}

// Hamiltonian of v_t = v_x^2 from one-sided slopes (Godunov, concave flux).
double godunov_square(double pm, double pp) {
  if (pm <= pp) return std::max(pm * pm, pp * pp);
  if (pp <= 0.0 && 0.0 <= pm) return 0.0;
  return std::min(pm * pm, pp * pp);
}

double slope_at_front(const Field& f, long J, int order) {
  const double h1 = f.b - f.x(static_cast<std::size_t>(J));
  const double vJ = f.v[static_cast<std::size_t>(J)];
  if (order >= 2 && J >= 1) {
    const double h2 = h1 + f.dx;
    return vJ * h2 / (h1 * f.dx) - f.v[static_cast<std::size_t>(J - 1)] * h1 / (h2 * f.dx);
  }
  return vJ / h1;
}

void fill_behind_front(Field& f, long J) {
  const double xJ = f.x(static_cast<std::size_t>(J));
  const double vJ = f.v[static_cast<std::size_t>(J)];
  for (std::size_t i = static_cast<std::size_t>(J) + 1; i < f.size(); ++i) {
    const double x = f.x(i);
    if (x >= f.b) {
      if (f.v[i] == 0.0) break;
      f.v[i] = 0.0;
      continue;
    }
    f.v[i] = vJ * (f.b - x) / (f.b - xJ);
  }
}

// Integer powers are common (m = 2, 3) and dominate the cost of g.
double fast_pow(double x, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

Snapshot make_snapshot(const Field& a, const Field& b, double lambda, double tag) {
  Snapshot s;
  s.first_index = b.first_index;
  s.dx = b.dx;
  s.tag = tag;
  s.t = a.t + lambda * (b.t - a.t);
  s.b = a.b + lambda * (b.b - a.b);
  s.v.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) s.v[i] = s.x(i) >= s.b ? 0.0 : a.v[i] + lambda * (b.v[i] - a.v[i]);
  return s;
}

Snapshot make_snapshot(const Field& f, double tag) { return make_snapshot(f, f, 0.0, tag); }

}  // namespace

double Field::value_at(double xq) const {
  if (v.empty()) return 0.0;
  const double s = xq / dx - static_cast<double>(first_index);
  if (s <= 0.0) return v.front();
  const double n1 = static_cast<double>(v.size() - 1);
  if (s >= n1) return s > n1 ? 0.0 : v.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

double Field::max_value() const { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

double Snapshot::at_index(long global) const {
  if (v.empty()) return 0.0;
  const long i = global - first_index;
  if (i < 0) return v.front();
  if (i >= static_cast<long>(v.size())) return 0.0;
  return v[static_cast<std::size_t>(i)];
}

void SolverConfig::validate() const {
  if (!(dx > 0.0)) throw ConfigError("solver: dx must be positive");
  if (!(cfl > 0.0) || cfl > 0.9) throw ConfigError("solver: CFL factor must lie in (0, 0.9]");
  if (slope_order != 1 && slope_order != 2) throw ConfigError("solver: slope order must be 1 or 2");
  if (right_padding < 10.0 * dx) throw ConfigError("solver: right padding must be at least 10 dx");
  if (!(dt_max > 0.0)) throw ConfigError("solver: dt_max must be positive");
  if (left == LeftBoundary::dirichlet && left_margin < 1.0)
    throw ConfigError("solver: left margin must be at least one period");
  if (max_steps <= 0) throw ConfigError("solver: max_steps must be positive");
}

Field init_step(const std::function<double(double)>& profile, double k, double x_left, double x_right, double dx) {
  if (!(dx > 0.0)) throw ConfigError("init: dx must be positive");
  if (!(x_left < k && k < x_right) || k - x_left < 2.0 * dx || x_right - k < 10.0 * dx)
    throw DomainError("init: window too small around the initial front");
  Field f;
  f.dx = dx;
  f.first_index = static_cast<long>(std::floor(x_left / dx + 1e-9));
  const long last = static_cast<long>(std::ceil(x_right / dx - 1e-9));
  f.v.assign(static_cast<std::size_t>(last - f.first_index + 1), 0.0);
  f.b = k;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    if (x <= k - 0.5 * dx) {
      const double val = profile(x);
      if (!(val >= 0.0) || !std::isfinite(val)) throw DomainError("init: profile must be finite and non-negative");
      f.v[i] = val;
    }
  }
  return f;
}

Field init_heaviside(const PeriodicSteadyState& q2, double k, double x_left, double x_right, double dx) {
  if (q2.p.empty()) throw DomainError("init: empty steady state");
  return init_step([&](double x) { return q2.pressure_at(x); }, k, x_left, x_right, dx);
}

double front_speed(const Field& field, const SolverConfig& cfg) {
  const long J = last_active(field);
  if (J < 0) throw DomainError("front_speed: no active node behind the front");
  return slope_at_front(field, J, cfg.slope_order);
}

Stepper::Stepper(const Environment& env, SolverConfig cfg) : env_(&env), cfg_(std::move(cfg)) {
  cfg_.validate();
  const double m = env.m();
  per_ = std::lround(1.0 / cfg_.dx);
  if (std::abs(static_cast<double>(per_) * cfg_.dx - 1.0) < 1e-12) {
    kappa_tab_.resize(static_cast<std::size_t>(per_));
    mod_tab_.resize(static_cast<std::size_t>(per_));
    for (long i = 0; i < per_; ++i) {
      const double x = static_cast<double>(i) * cfg_.dx;
      kappa_tab_[static_cast<std::size_t>(i)] = env.kappa_at(x);
      mod_tab_[static_cast<std::size_t>(i)] = env.reaction().modulation(x);
    }
  } else {
    per_ = 0;
  }
  // Sampled Lipschitz constant of g in v over the relevant pressure range.
  const double v_top = pressure_from_density(env.kappa_max() + 1.0, m);
  constexpr int nv = 512;
  for (int ix = 0; ix < 64; ++ix) {
    const double x = ix / 64.0;
    double prev = reaction_pressure(env, x, 0.0);
    for (int j = 1; j <= nv; ++j) {
      const double v = v_top * j / nv;
      const double g = reaction_pressure(env, x, v);
      rate_bound_ = std::max(rate_bound_, std::abs(g - prev) / (v_top / nv));
      prev = g;
    }
  }
}

void Stepper::maintain_window(Field& f) const {
  const double dx = f.dx;
  if (f.x_right() < f.b + cfg_.right_padding) {
    const long want = static_cast<long>(std::ceil((f.b + cfg_.right_padding + 1.0) / dx));
    const long have = f.first_index + static_cast<long>(f.size()) - 1;
    if (want > have) f.v.resize(f.v.size() + static_cast<std::size_t>(want - have), 0.0);
  }
  if (cfg_.left == LeftBoundary::dirichlet) {
    // The clamp sits at floor(b) - left_margin, so a solution that is ahead
    // moves its clamp first and ordering between runs is preserved.
    const long target = std::lround((std::floor(f.b + 1e-12) - cfg_.left_margin) / dx);
    const long drop = std::min<long>(target - f.first_index, static_cast<long>(f.size()) - 2);
    if (drop > 0) {
      f.v.erase(f.v.begin(), f.v.begin() + drop);
      f.first_index += drop;
    }
  }
}

StepInfo Stepper::step(Field& f, double dt_limit) {
  const long J = last_active(f);
  if (J < 0) throw DomainError("step: no active node behind the front");
  if (J + 1 >= static_cast<long>(f.size())) throw NumericalAbort("step: front left the window", f.b, f.t);
  const bool reflect = cfg_.left == LeftBoundary::reflect;
  const double dx = f.dx;
  const double m = env_->m();
  const auto n = static_cast<std::size_t>(J + 1);

  StepInfo info;
  info.slope = slope_at_front(f, J, cfg_.slope_order);
  info.speed = std::max(0.0, info.slope);

  double pmax = info.speed;
  for (std::size_t i = 0; i + 1 < n; ++i) pmax = std::max(pmax, std::abs(f.v[i + 1] - f.v[i]) / dx);
  pmax = std::max(pmax, f.v[n - 1] / (f.b - f.x(n - 1)));

  const double sigma = steps_ < cfg_.startup_steps ? 0.25 * cfg_.cfl : cfg_.cfl;
  double dt = cfg_.dt_max;
  if (pmax > 0.0) dt = std::min(dt, dx / (2.0 * pmax));
  if (rate_bound_ > 0.0) dt = std::min(dt, 1.0 / rate_bound_);
  dt = std::min(sigma * dt, dt_limit);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericalAbort("step: inadmissible time step", f.b, f.t);
  info.dt = dt;

  const double b_new = f.b + dt * info.speed;
  const double xJ = f.x(n - 1);
  const double hr_old = f.b - xJ;
  const double hr_new = b_new - xJ;

  lower_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  rhs_.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double vi = f.v[i];
    const double x = f.x(i);
    if (i == 0 && !reflect) {
      diag_[0] = 1.0;
      rhs_[0] = cfg_.left_value ? cfg_.left_value(x) : vi;
      continue;
    }
    const bool at_front = i + 1 == n;
    const double vl = i > 0 ? f.v[i - 1] : (n > 1 ? f.v[1] : 0.0);
    const double vr = at_front ? 0.0 : f.v[i + 1];
    const double pm = (vi - vl) / dx;
    const double pp = (vr - vi) / (at_front ? hr_old : dx);
    rhs_[i] = vi + dt * (godunov_square(pm, pp) + pressure_reaction(f, i, vi));

    const double hr = at_front ? hr_new : dx;
    const double a = dt * (m - 1.0) * vi * 2.0 / (dx + hr);
    double lo = -a / dx;
    double up = at_front ? 0.0 : -a / hr;
    if (i == 0) {  // mirror node v_{-1} = v_1
      up += lo;
      lo = 0.0;
    }
    lower_[i] = lo;
    upper_[i] = up;
    diag_[i] = 1.0 + a * (1.0 / dx + 1.0 / hr);
  }
  solve_tridiagonal(lower_, diag_, upper_, rhs_);

  for (std::size_t i = 0; i < n; ++i) {
    double val = rhs_[i];
    if (!std::isfinite(val)) throw NumericalAbort("step: non-finite pressure", f.x(i), f.t + dt);
    if (val < 0.0) {
      if (val < -kUndershoot) throw NumericalAbort("step: negative undershoot beyond round-off", f.x(i), f.t + dt);
      info.clipped_mass += -val * dx;
      val = 0.0;
    }
    f.v[i] = val;
  }

  f.t += dt;
  f.b = b_new;
  long Jn = static_cast<long>(n) - 1;
  // A front whose last active value died out retracts to the last positive node.
  while (Jn > 0 && f.v[static_cast<std::size_t>(Jn)] <= 0.0) {
    f.b = f.x(static_cast<std::size_t>(Jn));
    --Jn;
  }
  fill_behind_front(f, Jn);
  ++steps_;
  return info;
}

double Stepper::pressure_reaction(const Field& f, std::size_t i, double v) const {
  if (per_ == 0 || f.dx != cfg_.dx) return reaction_pressure(*env_, f.x(i), v);
  const long g = f.first_index + static_cast<long>(i);
  const auto k = static_cast<std::size_t>(((g % per_) + per_) % per_);
  const double m = env_->m();
  const double u = fast_pow((m - 1.0) * v / m, 1.0 / (m - 1.0));
  const auto& base = env_->reaction().base;
  const double shifted = u > 0.0 ? base(u) * fast_pow(u, m - 2.0) : base.times_power(u, m - 2.0);
  const double out = m * mod_tab_[k] * shifted * (kappa_tab_[k] - u);
  if (!std::isfinite(out)) throw DomainError("reaction_pressure: singular value near the front");
  return out;
}

Field step(const Environment& env, const Field& field, const SolverConfig& cfg) {
  Stepper stepper(env, cfg);
  Field out = field;
  stepper.maintain_window(out);
  stepper.step(out);
  return out;
}

SolveResult solve(const Environment& env, Field field, const StopCondition& until, const SolverConfig& cfg,
                  const RecorderSpec& recorder) {
  Stepper stepper(env, cfg);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::isfinite(field.v[i])) throw NumericalAbort("solve: non-finite initial pressure", field.x(i), field.t);
    if (field.v[i] < 0.0) throw DomainError("solve: negative initial pressure");
  }
  stepper.maintain_window(field);

  SolveResult out;
  const int stride = std::max(1, recorder.trajectory_stride);
  auto slope_now = [&] { return front_speed(field, stepper.config()); };
  {
    const double s = slope_now();
    out.trajectory.push(field.t, field.b, s, std::max(0.0, s));
  }

  const double t0 = field.t;
  long next_time_k = 0;
  if (recorder.snapshot_interval > 0.0) {
    out.snapshots.push_back(make_snapshot(field, field.t));
    next_time_k = 1;
  }
  const int per_unit = recorder.phases_per_unit;
  long next_station = 0;
  if (per_unit > 0) {
    next_station = static_cast<long>(std::ceil(std::max(recorder.phase_from, field.b) * per_unit - 1e-9));
    if (static_cast<double>(next_station) / per_unit <= field.b) {
      out.phase_snapshots.push_back(make_snapshot(field, static_cast<double>(next_station) / per_unit));
      ++next_station;
    }
  }

  auto done = [&] {
    if (field.t >= until.t_end - 1e-12 * std::max(1.0, std::abs(until.t_end))) return true;
    if (until.front_station && field.b >= *until.front_station) return true;
    if (until.predicate && until.predicate(field)) return true;
    return false;
  };

  const bool need_old = recorder.snapshot_interval > 0.0 || per_unit > 0;
  Field old;
  long steps = 0;
  while (!done()) {
    if (steps >= cfg.max_steps) throw NumericalAbort("solve: step budget exhausted", field.b, field.t);
    if (need_old) old = field;
    const StepInfo info = stepper.step(field, until.t_end - field.t);
    ++steps;
    out.clipped_mass += info.clipped_mass;
    if (steps % stride == 0) out.trajectory.push(field.t, field.b, info.slope, info.speed);

    if (recorder.snapshot_interval > 0.0) {
      while (true) {
        const double target = t0 + static_cast<double>(next_time_k) * recorder.snapshot_interval;
        if (target > field.t + 1e-12) break;
        const double lambda = std::clamp((target - old.t) / (field.t - old.t), 0.0, 1.0);
        out.snapshots.push_back(make_snapshot(old, field, lambda, target));
        ++next_time_k;
      }
    }
    if (per_unit > 0) {
      while (true) {
        const double station = static_cast<double>(next_station) / per_unit;
        if (station > field.b) break;
        const double db = field.b - old.b;
        const double lambda = db > 0.0 ? std::clamp((station - old.b) / db, 0.0, 1.0) : 1.0;
        out.phase_snapshots.push_back(make_snapshot(old, field, lambda, station));
        ++next_station;
      }
    }
    stepper.maintain_window(field);
  }
  if (steps % stride != 0) {
    const double s = slope_now();
    out.trajectory.push(field.t, field.b, s, std::max(0.0, s));
  }
  out.steps = steps;
  out.reached_stop = true;
  out.field = std::move(field);
  return out;
}

double supersolution_amplitude(double m) {
  if (!(m > 1.0)) throw DomainError("supersolution: m must exceed 1");
  return std::pow((m - 1.0) / (4.0 * m), 1.0 / (m - 1.0));
}

double supersolution_radius(const SupersolutionParams& p, double m, double t) {
  return std::sqrt(p.delta_star * (t + 1.0)) * std::exp((m - 1.0) * p.K * (t + 1.0) / 2.0);
}

bool supersolution_admissible(const SupersolutionParams& p, double m, double period_bound) {
  return 2.0 * supersolution_radius(p, m, 3.0 * period_bound) < 1.0;
}

double barenblatt_supersolution(const SupersolutionParams& p, double m, double x, double t) {
  const double A = supersolution_amplitude(m);
  const double d = x - p.x0;
  const double bracket = p.delta_star - d * d / ((t + 1.0) * std::exp((m - 1.0) * p.K * (t + 1.0)));
  if (bracket <= 0.0) return 0.0;
  return A * std::exp(p.K * (t + 1.0)) * std::pow(bracket, 1.0 / (m - 1.0));
}

double zkb_density(double m, double C, double x, double t) {
  if (!(t > 0.0)) throw DomainError("zkb: t must be positive");
  const double k = 1.0 / (m + 1.0);
  const double bracket = C - k * (m - 1.0) * x * x / (2.0 * m * std::pow(t, 2.0 * k));
  if (bracket <= 0.0) return 0.0;
  return std::pow(t, -k) * std::pow(bracket, 1.0 / (m - 1.0));
}

double zkb_front(double m, double C, double t) {
  const double k = 1.0 / (m + 1.0);
  return std::sqrt(2.0 * m * C / (k * (m - 1.0))) * std::pow(t, k);
}

}  // namespace sharpwave
