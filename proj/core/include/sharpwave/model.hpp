#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sharpwave {

/// One term amp * cos(2*pi*freq*x + phase) of a 1-periodic coefficient.
struct Harmonic {
  double amp = 0.0;
  int freq = 1;
  double phase = 0.0;
};

/// A 1-periodic function given as a mean plus a finite harmonic sum.
/// Integer frequencies make periodicity structural.
class PeriodicCoefficient {
 public:
  PeriodicCoefficient() = default;
  explicit PeriodicCoefficient(double mean, std::vector<Harmonic> harmonics = {});

  double operator()(double x) const;
  double derivative(double x) const;

  double mean() const noexcept { return mean_; }
  const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
  bool is_constant() const noexcept { return harmonics_.empty(); }

  /// Extremes over a uniform sample of [0,1).
  double sampled_min(int samples = 4096) const;
  double sampled_max(int samples = 4096) const;

 private:
  double mean_ = 1.0;
  std::vector<Harmonic> harmonics_;
};

/// Polynomial sum_k coeffs[k] * u^k, valid on [from, to).
struct PolyPiece {
  double from = 0.0;
  double to = std::numeric_limits<double>::infinity();
  std::vector<double> coeffs;
};

/// Piecewise polynomial profile in u >= 0. Pieces are sorted and contiguous;
/// the last piece extends to infinity.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  explicit PiecewisePolynomial(std::vector<PolyPiece> pieces);

  double operator()(double u) const;
  double derivative(double u) const;

  /// u^shift * p(u) evaluated termwise, so that a negative shift combined with
  /// vanishing low-order coefficients never produces 0 * inf.
  double times_power(double u, double shift) const;

  /// Smallest power with a nonzero coefficient in the piece containing u = 0
  /// (infinity when that piece is identically zero).
  double leading_power_at_zero() const;

  const std::vector<PolyPiece>& pieces() const noexcept { return pieces_; }

  /// Scale every coefficient.
  PiecewisePolynomial scaled(double factor) const;

 private:
  const PolyPiece& piece_for(double u) const;
  std::vector<PolyPiece> pieces_;
};

enum class ReactionFamily { monostable, bistable, combustion, multistable, custom };

std::string to_string(ReactionFamily family);
ReactionFamily reaction_family_from_string(const std::string& name);

/// f(x,u) = a(x) * f_base(u).
struct ReactionSpec {
  ReactionFamily family = ReactionFamily::monostable;
  std::optional<double> theta;           // defaults to kappa0/2 for monostable
  std::vector<double> sign_changes;      // multistable only, informative
  PiecewisePolynomial base;
  PeriodicCoefficient modulation{1.0};
};

/// PDE data for u_t = (u^m)_xx + f(x,u) (kappa(x) - u) on the line.
class Environment {
 public:
  /// Throws DomainError when m <= 1, when a(x) is not positive, or when the
  /// pressure-form reaction g(x,v) would be unbounded near v = 0.
  Environment(double m, PeriodicCoefficient kappa, ReactionSpec reaction);

  double m() const noexcept { return m_; }
  double theta() const noexcept { return theta_; }
  const PeriodicCoefficient& kappa() const noexcept { return kappa_; }
  const ReactionSpec& reaction() const noexcept { return reaction_; }
  ReactionFamily family() const noexcept { return reaction_.family; }

  double kappa_at(double x) const { return kappa_(x); }
  double kappa_min() const noexcept { return kappa_min_; }
  double kappa_max() const noexcept { return kappa_max_; }

  /// f(x,u) (without the kappa bracket).
  double f(double x, double u) const;
  /// d/du of f(x,u) (kappa(x) - u).
  double reaction_density_du(double x, double u) const;

  /// Exponent e such that g(x,v) ~ v^e as v -> 0 (infinity when f vanishes near 0).
  double pressure_reaction_exponent() const noexcept { return g_exponent_; }

  /// A copy with the reaction multiplied by `factor`.
  Environment with_scaled_reaction(double factor) const;

 private:
  double m_;
  PeriodicCoefficient kappa_;
  ReactionSpec reaction_;
  double theta_;
  double kappa_min_;
  double kappa_max_;
  double g_exponent_;
};

/// v = m/(m-1) u^(m-1).
double pressure_from_density(double u, double m);
/// u = ((m-1) v / m)^(1/(m-1)).
double density_from_pressure(double v, double m);

/// f(x,u) (kappa(x) - u).
double reaction_density(const Environment& env, double x, double u);
/// g(x,v) = m u^(m-2) f(x,u) (kappa(x) - u) with u the density of v.
double reaction_pressure(const Environment& env, double x, double v);

struct ValidationOptions {
  int x_samples = 512;
  int u_samples = 1024;
};

struct ClauseResult {
  std::string clause;
  bool pass = true;
  double witness_x = 0.0;
  double witness_u = 0.0;
  double value = 0.0;  // offending value at the witness
};

struct F1Report {
  bool pass = true;
  std::vector<ClauseResult> clauses;
  const ClauseResult* failure() const;
};

/// Samples the standing hypotheses on the reaction and kappa.
F1Report validate_F1(const Environment& env, const ValidationOptions& opts = {});

/// A constant K with f(x,u)(kappa(x)-u) <= K u on [0,1] x [0, kappa^0 + 1]:
/// the sampled supremum of the ratio plus a 10% margin.
double lipschitz_bound(const Environment& env, const ValidationOptions& opts = {});

namespace presets {

/// f = u, kappa = 1, m = 2 (theta = 0.01).
Environment fisher();
/// f = u, kappa = 1 + amp cos(2 pi x), m = 2.
Environment periodic_monostable(double amp = 0.2, double m = 2.0);
/// f = (u - theta)_+, kappa = 1.
Environment combustion(double theta = 0.3, double m = 2.0);
/// f = u (u - theta), kappa = 1.
Environment bistable(double theta = 0.25, double m = 2.0);
/// Multistable reaction with an intermediate stable state below theta,
/// tuned to produce a two-step propagating terrace from Heaviside data.
Environment multistable_terrace();

}  // namespace presets

}  // namespace sharpwave
