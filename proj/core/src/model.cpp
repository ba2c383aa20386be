#include "sharpwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sharpwave/error.hpp"

namespace sharpwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double eval_poly(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double eval_poly_derivative(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

PeriodicCoefficient::PeriodicCoefficient(double mean, std::vector<Harmonic> harmonics)
    : mean_(mean), harmonics_(std::move(harmonics)) {}

double PeriodicCoefficient::operator()(double x) const {
  double value = mean_;
  for (const auto& h : harmonics_) value += h.amp * std::cos(kTwoPi * h.freq * x + h.phase);
  return value;
}

double PeriodicCoefficient::derivative(double x) const {
  double value = 0.0;
  for (const auto& h : harmonics_)
    value -= h.amp * kTwoPi * h.freq * std::sin(kTwoPi * h.freq * x + h.phase);
  return value;
}

double PeriodicCoefficient::sampled_min(int samples) const {
  if (is_constant()) return mean_;
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) lo = std::min(lo, (*this)(static_cast<double>(i) / samples));
  return lo;
}

double PeriodicCoefficient::sampled_max(int samples) const {
  if (is_constant()) return mean_;
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) hi = std::max(hi, (*this)(static_cast<double>(i) / samples));
  return hi;
}

// ---------------------------------------------------------------------------

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolyPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("piecewise polynomial needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PolyPiece& a, const PolyPiece& b) { return a.from < b.from; });
  if (pieces_.front().from > 0.0) throw DomainError("piecewise polynomial must cover u = 0");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    if (std::abs(pieces_[i].to - pieces_[i + 1].from) > 1e-14)
      throw DomainError("piecewise polynomial pieces must be contiguous");
  }
  pieces_.back().to = std::numeric_limits<double>::infinity();
}

const PolyPiece& PiecewisePolynomial::piece_for(double u) const {
  for (const auto& p : pieces_)
    if (u < p.to) return p;
  return pieces_.back();
}

double PiecewisePolynomial::operator()(double u) const {
  if (pieces_.empty()) return 0.0;
  return eval_poly(piece_for(u).coeffs, u);
}

double PiecewisePolynomial::derivative(double u) const {
  if (pieces_.empty()) return 0.0;
  return eval_poly_derivative(piece_for(u).coeffs, u);
}

double PiecewisePolynomial::times_power(double u, double shift) const {
  if (pieces_.empty()) return 0.0;
  const auto& c = piece_for(u).coeffs;
  if (u > 0.0) return eval_poly(c, u) * std::pow(u, shift);
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    const double e = static_cast<double>(k) + shift;
    if (e == 0.0) acc += c[k];
    else if (e < 0.0) return std::copysign(std::numeric_limits<double>::infinity(), c[k]);
  }
  return acc;
}

double PiecewisePolynomial::leading_power_at_zero() const {
  if (pieces_.empty()) return std::numeric_limits<double>::infinity();
  const auto& c = pieces_.front().coeffs;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) return static_cast<double>(k);
  return std::numeric_limits<double>::infinity();
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  auto pieces = pieces_;
  for (auto& p : pieces)
    for (auto& c : p.coeffs) c *= factor;
  PiecewisePolynomial out;
  out.pieces_ = std::move(pieces);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ReactionFamily family) {
  switch (family) {
    case ReactionFamily::monostable: return "monostable";
    case ReactionFamily::bistable: return "bistable";
    case ReactionFamily::combustion: return "combustion";
    case ReactionFamily::multistable: return "multistable";
    case ReactionFamily::custom: return "custom";
  }
  return "custom";
}

ReactionFamily reaction_family_from_string(const std::string& name) {
  if (name == "monostable") return ReactionFamily::monostable;
  if (name == "bistable") return ReactionFamily::bistable;
  if (name == "combustion") return ReactionFamily::combustion;
  if (name == "multistable") return ReactionFamily::multistable;
  if (name == "custom") return ReactionFamily::custom;
  throw ConfigError("unknown reaction family '" + name + "'");
}

Environment::Environment(double m, PeriodicCoefficient kappa, ReactionSpec reaction)
    : m_(m), kappa_(std::move(kappa)), reaction_(std::move(reaction)) {
  if (!(m_ > 1.0)) throw DomainError("exponent m must exceed 1");
  kappa_min_ = kappa_.sampled_min();
  kappa_max_ = kappa_.sampled_max();
  if (reaction_.modulation.sampled_min() <= 0.0)
    throw DomainError("reaction modulation a(x) must be positive");

  if (reaction_.theta) {
    theta_ = *reaction_.theta;
  } else if (reaction_.family == ReactionFamily::monostable) {
    theta_ = 0.5 * kappa_min_;
  } else {
    throw DomainError("theta is required for the " + to_string(reaction_.family) + " family");
  }
  if (theta_ < 0.0) throw DomainError("theta must be non-negative");

  // g ~ u^(m-2+s) ~ v^((m-2+s)/(m-1)) with s the leading power of f_base at 0.
  const double s = reaction_.base.leading_power_at_zero();
  if (std::isinf(s)) {
    g_exponent_ = std::numeric_limits<double>::infinity();
  } else {
    const double e = m_ - 2.0 + s;
    if (e < 0.0)
      throw DomainError("pressure reaction g(x,v) is unbounded as v -> 0 (f_base ~ u^" +
                        std::to_string(s) + ", m = " + std::to_string(m_) + ")");
    g_exponent_ = e / (m_ - 1.0);
  }
}

double Environment::f(double x, double u) const {
  return reaction_.modulation(x) * reaction_.base(u);
}

double Environment::reaction_density_du(double x, double u) const {
  const double a = reaction_.modulation(x);
  const double k = kappa_(x);
  return a * (reaction_.base.derivative(u) * (k - u) - reaction_.base(u));
}

Environment Environment::with_scaled_reaction(double factor) const {
  ReactionSpec r = reaction_;
  r.base = r.base.scaled(factor);
  r.theta = theta_;
  return Environment(m_, kappa_, std::move(r));
}

// ---------------------------------------------------------------------------

double pressure_from_density(double u, double m) {
  if (!(m > 1.0)) throw DomainError("pressure_from_density: m must exceed 1");
  if (u < 0.0) throw DomainError("pressure_from_density: negative density");
  return m / (m - 1.0) * std::pow(u, m - 1.0);
}

double density_from_pressure(double v, double m) {
  if (!(m > 1.0)) throw DomainError("density_from_pressure: m must exceed 1");
  if (v < 0.0) throw DomainError("density_from_pressure: negative pressure");
  return std::pow((m - 1.0) * v / m, 1.0 / (m - 1.0));
}

double reaction_density(const Environment& env, double x, double u) {
  if (u < 0.0) throw DomainError("reaction_density: negative density");
  return env.f(x, u) * (env.kappa_at(x) - u);
}

double reaction_pressure(const Environment& env, double x, double v) {
  if (v < 0.0) throw DomainError("reaction_pressure: negative pressure");
  const double m = env.m();
  const double u = density_from_pressure(v, m);
  const double a = env.reaction().modulation(x);
  const double g = m * a * env.reaction().base.times_power(u, m - 2.0) * (env.kappa_at(x) - u);
  if (!std::isfinite(g)) throw DomainError("reaction_pressure: singular value near the front");
  return g;
}

// ---------------------------------------------------------------------------

const ClauseResult* F1Report::failure() const {
  for (const auto& c : clauses)
    if (!c.pass) return &c;
  return nullptr;
}

F1Report validate_F1(const Environment& env, const ValidationOptions& opts) {
  F1Report report;
  const int nx = std::max(1, opts.x_samples);
  const int nu = std::max(1, opts.u_samples);
  const double theta = env.theta();

  ClauseResult kappa_clause{"kappa>theta"};
  ClauseResult zero_clause{"f(x,0)=0"};
  ClauseResult positive_clause{"f>0 for u>theta"};
  kappa_clause.value = std::numeric_limits<double>::infinity();
  positive_clause.value = std::numeric_limits<double>::infinity();

  const double u_top = env.kappa_max() + 1.0;
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    const double margin = env.kappa_at(x) - theta;
    if (margin < kappa_clause.value) {
      kappa_clause.value = margin;
      kappa_clause.witness_x = x;
    }
    const double f0 = env.f(x, 0.0);
    if (zero_clause.pass && f0 != 0.0) {
      zero_clause.pass = false;
      zero_clause.witness_x = x;
      zero_clause.value = f0;
    }
    for (int j = 1; j <= nu; ++j) {
      const double u = theta + (u_top - theta) * static_cast<double>(j) / nu;
      const double fu = env.f(x, u);
      if (fu < positive_clause.value) {
        positive_clause.value = fu;
        positive_clause.witness_x = x;
        positive_clause.witness_u = u;
      }
    }
  }
  kappa_clause.pass = kappa_clause.value > 0.0;
  positive_clause.pass = positive_clause.value > 0.0;

  report.clauses = {kappa_clause, zero_clause, positive_clause};
  report.pass = kappa_clause.pass && zero_clause.pass && positive_clause.pass;
  return report;
}

double lipschitz_bound(const Environment& env, const ValidationOptions& opts) {
  const int nx = std::max(1, opts.x_samples);
  const int nu = std::max(1, opts.u_samples);
  const double u_top = env.kappa_max() + 1.0;
  double sup = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    // A probe very close to zero exposes ratios that blow up at the origin.
    const double probe = 1e-9;
    const double r0 = reaction_density(env, x, probe) / probe;
    if (!std::isfinite(r0) || r0 > 1e8)
      throw DomainError("lipschitz_bound: f(x,u)(kappa-u)/u is unbounded near u = 0");
    sup = std::max(sup, r0);
    for (int j = 1; j <= nu; ++j) {
      const double u = u_top * static_cast<double>(j) / nu;
      sup = std::max(sup, reaction_density(env, x, u) / u);
    }
  }
  return std::max(1.1 * sup, 1e-12);
}

// ---------------------------------------------------------------------------

namespace presets {

namespace {
PiecewisePolynomial single(std::vector<double> coeffs) {
  return PiecewisePolynomial({PolyPiece{0.0, std::numeric_limits<double>::infinity(), std::move(coeffs)}});
}
}  // namespace

Environment fisher() {
  ReactionSpec r;
  r.family = ReactionFamily::monostable;
  r.theta = 0.01;
  r.base = single({0.0, 1.0});
  return Environment(2.0, PeriodicCoefficient(1.0), std::move(r));
}

Environment periodic_monostable(double amp, double m) {
  ReactionSpec r;
  r.family = ReactionFamily::monostable;
  r.theta = 0.01;
  r.base = single({0.0, 1.0});
  return Environment(m, PeriodicCoefficient(1.0, {Harmonic{amp, 1, 0.0}}), std::move(r));
}

Environment combustion(double theta, double m) {
  ReactionSpec r;
  r.family = ReactionFamily::combustion;
  r.theta = theta;
  r.base = PiecewisePolynomial({PolyPiece{0.0, theta, {0.0}},
                                PolyPiece{theta, std::numeric_limits<double>::infinity(), {-theta, 1.0}}});
  return Environment(m, PeriodicCoefficient(1.0), std::move(r));
}

Environment bistable(double theta, double m) {
  ReactionSpec r;
  r.family = ReactionFamily::bistable;
  r.theta = theta;
  r.base = single({0.0, -theta, 1.0});
  return Environment(m, PeriodicCoefficient(1.0), std::move(r));
}

Environment multistable_terrace() {
  // f_base > 0 on (0,a), < 0 on (a,theta), > 0 beyond theta. The state u = a
  // is stable, so Heaviside data split into a fast lower front (0 -> a) and a
  // slow upper front (a -> kappa).
  constexpr double a = 0.3;
  constexpr double theta = 0.5;
  constexpr double c1 = 20.0;
  constexpr double c2 = 20.0;
  constexpr double c3 = 0.6;
  ReactionSpec r;
  r.family = ReactionFamily::multistable;
  r.theta = theta;
  r.sign_changes = {a, theta};
  r.base = PiecewisePolynomial({
      PolyPiece{0.0, a, {0.0, c1 * a, -c1}},
      PolyPiece{a, theta, {c2 * a * theta, -c2 * (a + theta), c2}},
      PolyPiece{theta, std::numeric_limits<double>::infinity(), {-c3 * theta, c3}},
  });
  return Environment(2.0, PeriodicCoefficient(1.0), std::move(r));
}

}  // namespace presets

}  // namespace sharpwave
