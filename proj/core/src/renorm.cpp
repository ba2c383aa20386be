#include "sharpwave/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sharpwave/error.hpp"

namespace sharpwave {

std::vector<double> crossing_times(const FrontTrajectory& traj, const std::vector<double>& stations) {
  if (traj.size() == 0) throw DomainError("crossing_times: empty trajectory");
  std::vector<double> out;
  out.reserve(stations.size());
  std::size_t i = 0;
  for (double s : stations) {
    if (traj.b.front() > s) throw DomainError("crossing_times: station lies behind the initial front");
    while (i < traj.size() && traj.b[i] < s) ++i;
    if (i == traj.size()) throw DomainError("crossing_times: station " + std::to_string(s) + " not reached");
    double t = traj.t[i];
    if (i > 0 && traj.b[i] > traj.b[i - 1]) {
      const double w = (s - traj.b[i - 1]) / (traj.b[i] - traj.b[i - 1]);
      t = traj.t[i - 1] + w * (traj.t[i] - traj.t[i - 1]);
    }
    if (!out.empty() && !(t > out.back())) throw DomainError("crossing_times: times are not strictly increasing");
    out.push_back(t);
  }
  return out;
}

double RenormSequence::value(std::size_t k, int j, long rel) const {
  return frames[k][static_cast<std::size_t>(j)].at_index(n[k] * per + rel);
}

std::pair<long, long> RenormSequence::relative_range(std::size_t k, int j) const {
  const Snapshot& s = frames[k][static_cast<std::size_t>(j)];
  const long lo = s.first_index - n[k] * per;
  return {lo, lo + static_cast<long>(s.v.size()) - 1};
}

RenormSequence extract_sequence(const SolveResult& run, const RenormConfig& cfg) {
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min + 1) throw ConfigError("renorm: need n_max > n_min >= 0");
  if (cfg.phases_per_unit < 2) throw ConfigError("renorm: need at least 2 phases per unit");
  if (!(cfg.window_left < 0.0 && cfg.window_right > 0.0)) throw ConfigError("renorm: window must contain 0");
  if (!(cfg.tol > 0.0)) throw ConfigError("renorm: tolerance must be positive");

  RenormSequence seq;
  seq.config = cfg;
  seq.dx = run.field.dx;
  seq.per = std::lround(1.0 / seq.dx);
  if (std::abs(static_cast<double>(seq.per) * seq.dx - 1.0) > 1e-9)
    throw DomainError("renorm: the grid must place an integer number of nodes in a period");
  const int J = cfg.phases_per_unit;

  std::map<long, const Snapshot*> by_station;
  for (const auto& s : run.phase_snapshots) by_station[std::lround(s.tag * J)] = &s;

  std::vector<double> stations;
  for (long n = cfg.n_min; n <= cfg.n_max + 1; ++n) stations.push_back(static_cast<double>(n));
  seq.t_n = crossing_times(run.trajectory, stations);
  seq.trajectory = run.trajectory;

  seq.window_lo = std::lround(cfg.window_left * static_cast<double>(seq.per));
  const long window_hi = std::lround(cfg.window_right * static_cast<double>(seq.per));
  const auto nw = static_cast<std::size_t>(window_hi - seq.window_lo + 1);

  for (long n = cfg.n_min; n <= cfg.n_max; ++n) {
    const std::size_t k = seq.n.size();
    seq.n.push_back(n);
    seq.s_n.push_back(seq.t_n[k + 1] - seq.t_n[k]);
    std::vector<Snapshot> frames;
    std::vector<WaveFrame> window;
    for (int j = 0; j < J; ++j) {
      auto it = by_station.find(n * J + j);
      if (it == by_station.end())
        throw DomainError("renorm: insufficient recording density, missing front phase " + std::to_string(n) + "+" +
                          std::to_string(j) + "/" + std::to_string(J));
      const Snapshot& s = *it->second;
      frames.push_back(s);
      WaveFrame w;
      w.tau = s.t - seq.t_n[k];
      w.b = s.b - static_cast<double>(n);
      w.v.resize(nw);
      for (std::size_t i = 0; i < nw; ++i) w.v[i] = s.at_index(n * seq.per + seq.window_lo + static_cast<long>(i));
      window.push_back(std::move(w));
    }
    seq.frames.push_back(std::move(frames));
    seq.window.push_back(std::move(window));
  }

  const long origin = -seq.window_lo;
  for (std::size_t k = 0; k < seq.n.size(); ++k)
    seq.origin_value = std::max(seq.origin_value, seq.window[k][0].v[static_cast<std::size_t>(origin)]);

  for (std::size_t k = 0; k + 1 < seq.n.size(); ++k) {
    double d = 0.0, dt = 0.0;
    for (int j = 0; j < J; ++j) {
      const auto& a = seq.window[k][static_cast<std::size_t>(j)];
      const auto& b = seq.window[k + 1][static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < nw; ++i) d = std::max(d, std::abs(b.v[i] - a.v[i]));
      dt = std::max(dt, std::abs(b.tau - a.tau));
    }
    seq.convergence.push_back(d);
    seq.time_mismatch.push_back(dt);
    seq.gap_monotonicity_violation = std::max(seq.gap_monotonicity_violation, seq.s_n[k] - seq.s_n[k + 1]);

    // Profiles at the crossing times, v(. + n, t_n), decrease in n. The
    // period next to the clamped boundary is a boundary layer and is skipped.
    const auto [lo_a, hi_a] = seq.relative_range(k, 0);
    const auto [lo_b, hi_b] = seq.relative_range(k + 1, 0);
    for (long r = std::max(lo_a, lo_b) + seq.per; r <= std::min(hi_a, hi_b); ++r)
      seq.decrease_violation = std::max(seq.decrease_violation, seq.value(k + 1, 0, r) - seq.value(k, 0, r));
  }
  return seq;
}

WaveResult extract_wave(const RenormSequence& seq, double tol) {
  const std::size_t K = seq.n.size();
  if (K < 2) throw DomainError("extract_wave: need at least two renormalized periods");
  const auto& hist = seq.convergence;
  const auto need = static_cast<std::size_t>(std::max(1, seq.config.confirmations));

  WaveResult w;
  w.convergence_history = hist;
  w.s_n = seq.s_n;
  for (std::size_t i = 0; i + need <= hist.size(); ++i) {
    bool ok = true;
    for (std::size_t c = 0; c < need; ++c) ok = ok && hist[i + c] <= tol;
    if (ok) {
      w.converged = true;
      w.n_converged = seq.n[i];
      break;
    }
  }
  if (!w.converged)
    throw ConvergenceError("renormalized profiles did not settle within the requested range", hist.back());
  const double s_last = seq.s_n[K - 1];
  const double s_prev = seq.s_n[K - 2];
  if (std::abs(s_last - s_prev) > tol * s_last)
    throw ConvergenceError("the gap sequence s_n has not stabilised", std::abs(s_last - s_prev));

  const std::size_t kN = K - 2;
  w.n_last = seq.n[kN];
  w.T = seq.s_n[kN];
  w.average_speed = 1.0 / w.T;
  w.dx = seq.dx;
  w.per = seq.per;
  w.window_lo = seq.window_lo;
  w.phases_per_unit = seq.config.phases_per_unit;
  w.V = seq.window[kN];
  w.line = seq.frames[kN];
  w.next_line = seq.frames[kN + 1];
  for (const auto& f : w.V) w.max_V = std::max(w.max_V, *std::max_element(f.v.begin(), f.v.end()));

  const double tN = seq.t_n[kN];
  const double tN1 = seq.t_n[kN + 1];
  const auto& tr = seq.trajectory;
  w.delta_star = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.t[i] < tN || tr.t[i] > tN1) continue;
    w.boundary.tau.push_back(tr.t[i] - tN);
    w.boundary.B.push_back(tr.b[i] - static_cast<double>(w.n_last));
    w.boundary.Bprime.push_back(tr.speed[i]);
    w.delta_star = std::min(w.delta_star, tr.speed[i]);
  }
  if (w.boundary.tau.empty()) throw DomainError("extract_wave: trajectory does not cover the last period");
  return w;
}

namespace {

// Least-squares slope -V_x(B-0) from V ~ a (x-B) + c (x-B)^2 on the last cells.
double fitted_front_slope(const WaveResult& w, const WaveFrame& f) {
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  int count = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    const double xi = w.window_x(i) - f.b;
    if (xi > -0.5 * w.dx || xi < -8.0 * w.dx) continue;
    const double q = xi * xi;
    s11 += xi * xi;
    s12 += xi * q;
    s22 += q * q;
    r1 += xi * f.v[i];
    r2 += q * f.v[i];
    ++count;
  }
  if (count < 3) return std::numeric_limits<double>::quiet_NaN();
  const double det = s11 * s22 - s12 * s12;
  const double a = (r1 * s22 - r2 * s12) / det;
  return -a;
}

double window_lerp(const WaveResult& w, const WaveFrame& f, double x) {
  const double s = x / w.dx - static_cast<double>(w.window_lo);
  if (s <= 0.0) return f.v.front();
  if (s >= static_cast<double>(f.v.size() - 1)) return f.v.back();
  const auto i = static_cast<std::size_t>(s);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * f.v[i] + t * f.v[i + 1];
}

}  // namespace

WaveReport verify_wave(const Environment& env, const WaveResult& w, const std::vector<PeriodicSteadyState>& candidates,
                       const VerifyOptions& opts) {
  (void)env;
  WaveReport rep;
  const int J = static_cast<int>(w.V.size());
  const long N = w.n_last;
  const long per = w.per;
  if (J == 0 || w.line.size() != w.V.size() || w.next_line.empty())
    throw DomainError("verify_wave: incomplete wave result");

  // (i) positivity behind the front on the whole recorded line, zero ahead of it
  rep.min_interior = std::numeric_limits<double>::infinity();
  for (int j = 0; j < J; ++j) {
    const Snapshot& s = w.line[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      const double x = s.x(i);
      if (x <= s.b - s.dx) rep.min_interior = std::min(rep.min_interior, s.v[i]);
      if (x >= s.b) rep.max_beyond = std::max(rep.max_beyond, s.v[i]);
    }
  }
  rep.positive = rep.min_interior > 0.0 && rep.max_beyond == 0.0;

  // (ii) the period one cell-period inside the left end against each steady state
  rep.tail_residual = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    TailMatch m{to_string(candidates[c].kind), 0.0};
    for (int j = 0; j < J; ++j) {
      const Snapshot& s = w.line[static_cast<std::size_t>(j)];
      for (long g = s.first_index + per; g < s.first_index + 2 * per; ++g) {
        const double x = static_cast<double>(g) * s.dx;
        m.residual = std::max(m.residual, std::abs(s.at_index(g) - candidates[c].pressure_at(x)));
      }
    }
    if (m.residual < rep.tail_residual) {
      rep.tail_residual = m.residual;
      rep.best_tail = static_cast<int>(c);
    }
    rep.tail.push_back(m);
  }
  rep.tail_ok = rep.best_tail >= 0 && rep.tail_residual <= opts.tail_tol;

  // (iii) Darcy law: B' from the phase stations against the fitted edge slope
  auto frame_tau = [&](int j) {
    if (j < 0) return w.V[static_cast<std::size_t>(j + J)].tau - w.T;
    if (j >= J) return w.V[static_cast<std::size_t>(j - J)].tau + w.T;
    return w.V[static_cast<std::size_t>(j)].tau;
  };
  for (int j = 0; j < J; ++j) {
    const double bprime = (2.0 / J) / (frame_tau(j + 1) - frame_tau(j - 1));
    const double slope = fitted_front_slope(w, w.V[static_cast<std::size_t>(j)]);
    if (!std::isfinite(slope)) continue;
    rep.darcy_residual = std::max(rep.darcy_residual, std::abs(bprime - slope) / bprime);
  }
  rep.darcy_ok = rep.darcy_residual <= opts.darcy_tol;

  // (iv) V_t >= 0 where consecutive frames are both positive
  std::vector<WaveFrame> cycle = w.V;
  {
    WaveFrame closing;
    closing.tau = w.T;
    closing.b = 1.0;
    closing.v.resize(w.V[0].v.size());
    for (std::size_t i = 0; i < closing.v.size(); ++i)
      closing.v[i] = w.next_line[0].at_index(N * per + w.window_lo + static_cast<long>(i));
    cycle.push_back(std::move(closing));
  }
  rep.min_Vt = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < cycle.size(); ++j) {
    const auto& a = cycle[j];
    const auto& b = cycle[j + 1];
    const double dtau = b.tau - a.tau;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
      if (w.window_x(i) >= std::min(a.b, b.b)) break;
      rep.min_Vt = std::min(rep.min_Vt, (b.v[i] - a.v[i]) / dtau);
    }
  }
  rep.monotone_ok = rep.min_Vt >= -opts.vt_tol;

  // (v) V(x, tau + T) - V(x - 1, tau), with the next period interpolated in time
  const double t_next = w.next_line[0].t;
  std::vector<double> next_tau;
  for (const auto& s : w.next_line) next_tau.push_back(s.t - t_next);
  const long lo = w.window_lo - per;
  const long hi = lo + static_cast<long>(w.V[0].v.size()) - 1;
  for (int j = 0; j < J; ++j) {
    const double tau = w.V[static_cast<std::size_t>(j)].tau;
    std::size_t a = 0;
    while (a + 2 < next_tau.size() && next_tau[a + 1] < tau) ++a;
    const std::size_t b = std::min(a + 1, next_tau.size() - 1);
    const double lam = b == a ? 0.0 : (tau - next_tau[a]) / (next_tau[b] - next_tau[a]);
    for (long r = lo; r <= hi; ++r) {
      const double later = (1.0 - lam) * w.next_line[a].at_index((N + 1) * per + r) +
                           lam * w.next_line[b].at_index((N + 1) * per + r);
      const double now = w.line[static_cast<std::size_t>(j)].at_index(N * per + r);
      rep.periodicity_defect = std::max(rep.periodicity_defect, std::abs(later - now));
    }
  }
  rep.periodic_ok = rep.periodicity_defect <= opts.periodic_rel * w.max_V;

  // gradient bound near the front and the lower profile behind it
  rep.lower_profile_min = std::numeric_limits<double>::infinity();
  for (const auto& f : w.V) {
    for (std::size_t i = 0; i < f.v.size(); ++i) {
      const double gap = f.b - w.window_x(i);
      if (gap <= 0.5 * w.dx || gap > 1.0) continue;
      rep.gradient_bound = std::max(rep.gradient_bound, f.v[i] / gap);
    }
    for (double s = 0.25; s <= 6.0; s += w.dx)
      rep.lower_profile_min = std::min(rep.lower_profile_min, window_lerp(w, f, f.b - s));
  }

  rep.pass = rep.positive && rep.tail_ok && rep.darcy_ok && rep.monotone_ok && rep.periodic_ok && w.delta_star > 0.0;
  return rep;
}

LinftyReport check_linfty(const RenormSequence& seq, const WaveResult& wave, long check_n, double rel) {
  LinftyReport rep;
  rep.check_n = check_n;
  const auto it = std::find(seq.n.begin(), seq.n.end(), wave.n_last);
  if (it == seq.n.end()) throw DomainError("check_linfty: the wave does not come from this sequence");
  const auto kN = static_cast<std::size_t>(it - seq.n.begin());
  const int J = seq.config.phases_per_unit;
  for (const auto& s : wave.line) rep.max_V = std::max(rep.max_V, *std::max_element(s.v.begin(), s.v.end()));
  rep.threshold = rel * rep.max_V;

  for (std::size_t k = 0; k < kN; ++k) {
    double gap = 0.0;
    for (int j = 0; j < J; ++j) {
      const auto [la, ha] = seq.relative_range(k, j);
      const auto [lb, hb] = seq.relative_range(kN, j);
      for (long r = std::max(la, lb) + seq.per; r <= std::min(ha, hb); ++r)
        gap = std::max(gap, std::abs(seq.value(k, j, r) - seq.value(kN, j, r)));
    }
    rep.n.push_back(seq.n[k]);
    rep.gap.push_back(gap);
  }
  rep.decreasing = true;
  for (std::size_t i = 0; i + 1 < rep.gap.size(); ++i)
    if (rep.gap[i + 1] > rep.gap[i] + seq.config.tol) rep.decreasing = false;

  bool found = false;
  for (std::size_t i = 0; i < rep.n.size(); ++i)
    if (rep.n[i] == check_n) {
      rep.gap_at_check = rep.gap[i];
      found = true;
    }
  rep.pass = found && rep.decreasing && rep.gap_at_check <= rep.threshold;
  return rep;
}

}  // namespace sharpwave
