#include "sharpwave/phaseplane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "sharpwave/error.hpp"

namespace sharpwave {

std::string to_string(F0Case c) {
  switch (c) {
    case F0Case::monostable: return "monostable";
    case F0Case::combustion: return "combustion";
    case F0Case::bistable: return "bistable";
  }
  return "monostable";
}

IntegralCheck check_integral_condition(const UProfile& f0, double m, double kappa0, int n_grid) {
  IntegralCheck out;
  const int n = std::max(2, n_grid);
  const double h = kappa0 / n;
  auto integrand = [&](double r) { return std::pow(r, m - 1.0) * f0(r); };

  double F = 0.0;
  double scale = 0.0;
  out.margin = std::numeric_limits<double>::infinity();
  // March from kappa0 down; F(u_k) for k = n-1, ..., 0.
  for (int k = n - 1; k >= 0; --k) {
    const double a = k * h, b = (k + 1) * h;
    const double fa = integrand(a), fm = integrand(0.5 * (a + b)), fb = integrand(b);
    F += h / 6.0 * (fa + 4.0 * fm + fb);
    scale += h / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
    if (F < out.margin) {
      out.margin = F;
      out.argmin_u = a;
    }
  }
  out.value_at_zero = F;
  out.pass = out.margin > 1e-10 * std::max(scale, 1e-300);
  return out;
}

// ---------------------------------------------------------------------------

double CompactSubsolution::phi_at(double zz) const {
  if (z.empty() || zz <= z.front() || zz >= z.back()) return 0.0;
  auto it = std::upper_bound(z.begin(), z.end(), zz);
  const std::size_t j = static_cast<std::size_t>(it - z.begin());
  const double t = (zz - z[j - 1]) / (z[j] - z[j - 1]);
  return (1.0 - t) * phi[j - 1] + t * phi[j];
}

std::vector<double> CompactSubsolution::psi() const {
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] = pressure_from_density(std::max(phi[i], 0.0), m);
  return out;
}

namespace {

struct Side {
  std::vector<double> z;
  std::vector<double> q;
  double z_edge = 0.0;
  double flux_edge = 0.0;
  double slope_edge = 0.0;  // finite estimate of -psi' used when the flux vanishes
};

// One branch of the shooting problem. dir = +1 integrates ahead of the peak,
// dir = -1 behind it.
Side shoot_side(const UProfile& f0, double m, double c, double q0, int dir, const ShootOptions& opts) {
  Side side;
  using State = std::array<double, 2>;  // (q, W = (q^m)')
  auto rhs_z = [&](const State& s) -> State {
    const double qp = s[1] / (m * std::pow(s[0], m - 1.0));
    return {qp, -c * qp - f0(s[0])};
  };

  State s{q0, 0.0};
  double z = opts.z_origin;
  side.z.push_back(z);
  side.q.push_back(q0);
  const double q_switch = opts.switch_fraction * q0;
  // Expected sign of W on this branch: decreasing q away from the peak.
  const double w_sign = dir > 0 ? -1.0 : 1.0;

  while (s[0] > q_switch) {
    const State d = rhs_z(s);
    double h = opts.z_step;
    if (std::abs(d[0]) > 0.0) h = std::min(h, 0.02 * s[0] / std::abs(d[0]));
    h *= dir;
    State k1 = d;
    State k2 = rhs_z({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]});
    State k3 = rhs_z({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]});
    State k4 = rhs_z({s[0] + h * k3[0], s[1] + h * k3[1]});
    State next{s[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
               s[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    z += h;
    if (!(next[0] > 0.0) || !std::isfinite(next[1])) break;  // hand over to the q-parametrisation
    if (next[0] > s[0] || w_sign * next[1] <= 0.0)
      throw DomainError("no touchdown: profile turns back before reaching zero");
    if (std::abs(z - opts.z_origin) > opts.z_budget)
      throw DomainError("no touchdown within the z budget");
    s = next;
    side.z.push_back(z);
    side.q.push_back(s[0]);
  }

  // q-parametrised tail: dW/dq = -c - m q^(m-1) f0(q) / W, dz/dq = m q^(m-1) / W.
  const double q_start = side.q.back();
  double W = s[1];
  double zz = side.z.back();
  const int n = std::max(16, opts.q_steps);
  const double dq = -q_start / n;
  using Tail = std::array<double, 2>;  // (W, z)
  auto rhs_q = [&](double q, const Tail& t) -> Tail {
    const double mq = m * std::pow(std::max(q, 0.0), m - 1.0);
    return {-c - mq * f0(std::max(q, 0.0)) / t[0], mq / t[0]};
  };
  Tail t{W, zz};
  for (int i = 0; i < n; ++i) {
    const double q = q_start + i * dq;
    Tail k1 = rhs_q(q, t);
    Tail k2 = rhs_q(q + 0.5 * dq, {t[0] + 0.5 * dq * k1[0], t[1] + 0.5 * dq * k1[1]});
    Tail k3 = rhs_q(q + 0.5 * dq, {t[0] + 0.5 * dq * k2[0], t[1] + 0.5 * dq * k2[1]});
    Tail k4 = rhs_q(q + dq, {t[0] + dq * k3[0], t[1] + dq * k3[1]});
    Tail next{t[0] + dq / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
              t[1] + dq / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    if (!std::isfinite(next[0]) || w_sign * next[0] <= 0.0)
      throw DomainError("no touchdown: flux vanishes before the profile reaches zero");
    t = next;
    side.z.push_back(t[1]);
    side.q.push_back(i + 1 == n ? 0.0 : q + dq);
  }
  side.z_edge = t[1];
  side.flux_edge = t[0];
  if (std::abs(side.flux_edge) > 1e-10) {
    side.slope_edge = std::numeric_limits<double>::infinity();
  } else {
    // Finite pressure slope: psi / distance-to-edge on the last interior sample.
    const std::size_t k = side.q.size() - 2;
    side.slope_edge = pressure_from_density(side.q[k], m) / std::abs(side.z_edge - side.z[k]);
  }
  return side;
}

}  // namespace

CompactSubsolution shoot_compact_wave(const UProfile& f0, double m, double c, double q0,
                                      const ShootOptions& opts) {
  if (!(m > 1.0)) throw DomainError("shoot_compact_wave: m must exceed 1");
  if (!(q0 > 0.0)) throw DomainError("shoot_compact_wave: peak must be positive");
  if (c < 0.0) throw DomainError("shoot_compact_wave: speed must be non-negative");
  if (!(f0(q0) > 0.0)) throw DomainError("no touchdown: f0(q0) <= 0 so q0 is not a strict maximum");

  const Side ahead = shoot_side(f0, m, c, q0, +1, opts);
  const Side behind = shoot_side(f0, m, c, q0, -1, opts);

  CompactSubsolution sub;
  sub.m = m;
  sub.c = c;
  sub.q0 = q0;
  sub.f0 = f0;
  sub.l_plus = ahead.z_edge - opts.z_origin;
  sub.l_minus = opts.z_origin - behind.z_edge;
  sub.l0 = 0.5 * (ahead.z_edge - behind.z_edge);
  const double centre = 0.5 * (ahead.z_edge + behind.z_edge);
  sub.edge_flux = ahead.flux_edge;
  sub.trailing_flux = behind.flux_edge;
  sub.edge_slope = ahead.slope_edge;

  sub.z.reserve(ahead.z.size() + behind.z.size());
  for (std::size_t i = behind.z.size(); i-- > 1;) {
    sub.z.push_back(behind.z[i] - centre);
    sub.phi.push_back(behind.q[i]);
  }
  for (std::size_t i = 0; i < ahead.z.size(); ++i) {
    sub.z.push_back(ahead.z[i] - centre);
    sub.phi.push_back(ahead.q[i]);
  }
  sub.z.front() = -sub.l0;
  sub.z.back() = sub.l0;

  if (!(sub.edge_slope > c)) {
    std::ostringstream msg;
    msg << "subsolution condition violated: edge slope " << sub.edge_slope << " <= c = " << c;
    throw DomainError(msg.str());
  }
  return sub;
}

// ---------------------------------------------------------------------------

namespace {

double domination_margin(const Environment& env, const UProfile& f0, double kappa0, int nx, int nu,
                         double* witness_u = nullptr) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    for (int j = 0; j <= nu; ++j) {
      const double u = kappa0 * j / nu;
      const double d = reaction_density(env, x, u) - f0(u);
      if (d < worst) {
        worst = d;
        if (witness_u) *witness_u = u;
      }
    }
  }
  return worst;
}

}  // namespace

F0Profile build_f0(const Environment& env, F0Case kind, const F0Options& opts) {
  F0Profile out;
  out.kind = kind;
  const double kappa0 = env.kappa_min();
  const double kappa_top = env.kappa_max();
  out.kappa0 = kappa0;
  const double m = env.m();

  if (kind == F0Case::bistable) {
    const auto& mod = env.reaction().modulation;
    const double a_min = mod.sampled_min(), a_max = mod.sampled_max();
    const auto base = env.reaction().base;
    const double theta = env.theta();
    out.threshold = theta;
    out.f0 = [=](double u) {
      if (u <= 0.0 || u >= kappa0) return 0.0;
      const double fb = base(u);
      const double fmin = fb >= 0.0 ? a_min * fb : a_max * fb;  // min over x of a(x) f_base(u)
      return u < theta ? fmin * (kappa_top - u) : fmin * (kappa0 - u);
    };
    out.integral = check_integral_condition(out.f0, m, kappa0);
    if (!out.integral.pass) {
      std::ostringstream msg;
      msg << "F3 not verifiable: integral condition fails at u = " << out.integral.argmin_u
          << " (F = " << out.integral.margin << ")";
      throw DomainError(msg.str());
    }
    double wu = 0.0;
    out.domination_margin = domination_margin(env, out.f0, kappa0, opts.x_samples, opts.u_samples, &wu);
    if (out.domination_margin < -1e-12) {
      std::ostringstream msg;
      msg << "F3 not verifiable: domination fails at u = " << wu;
      throw DomainError(msg.str());
    }
    shoot_compact_wave(out.f0, m, opts.c, opts.q0_fraction * kappa0);
    return out;
  }

  const double threshold = kind == F0Case::monostable ? 0.5 * kappa0 : 0.5 * (env.theta() + kappa0);
  out.threshold = threshold;
  double delta = opts.initial_amplitude;
  std::string last_failure = "no attempt";
  for (int k = 0; k <= opts.max_halvings; ++k, delta *= 0.5) {
    UProfile f0 = [=](double u) {
      if (u <= threshold || u >= kappa0) return 0.0;
      return delta * (u - threshold) * (kappa0 - u);
    };
    const double margin = domination_margin(env, f0, kappa0, opts.x_samples, opts.u_samples);
    if (margin < -1e-12) {
      last_failure = "domination";
      continue;
    }
    const auto integral = check_integral_condition(f0, m, kappa0);
    if (!integral.pass) {
      last_failure = "integral condition";
      continue;
    }
    try {
      shoot_compact_wave(f0, m, opts.c, opts.q0_fraction * kappa0);
    } catch (const DomainError& e) {
      last_failure = e.what();
      continue;
    }
    out.amplitude = delta;
    out.f0 = std::move(f0);
    out.integral = integral;
    out.domination_margin = margin;
    return out;
  }
  throw DomainError("F3 not verifiable: no admissible amplitude (" + last_failure + ")");
}

F2Report verify_F2(const Environment& env, const CompactSubsolution& sub, int n_x, int n_z) {
  F2Report report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_x; ++i) {
    const double x = static_cast<double>(i) / n_x;
    for (int j = 0; j <= n_z; ++j) {
      const double zz = -sub.l0 + 2.0 * sub.l0 * j / n_z;
      const double phi = sub.phi_at(zz);
      const double val = reaction_density(env, x, phi) - sub.f0(phi);
      if (val < report.min_value) {
        report.min_value = val;
        report.witness_x = x;
        report.witness_z = zz;
      }
    }
  }
  report.edge_ok = sub.edge_slope > sub.c;
  report.pass = report.edge_ok && report.min_value >= -1e-12;
  return report;
}

}  // namespace sharpwave
