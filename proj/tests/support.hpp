#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sharpwave/model.hpp"

namespace sharpwave::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline PiecewisePolynomial poly(std::vector<double> coeffs) {
  return PiecewisePolynomial({PolyPiece{0.0, kInf, std::move(coeffs)}});
}

inline ReactionSpec monostable(PiecewisePolynomial base, std::optional<double> theta = std::nullopt,
                               PeriodicCoefficient modulation = PeriodicCoefficient(1.0)) {
  return ReactionSpec{ReactionFamily::monostable, theta, {}, std::move(base), std::move(modulation)};
}

/// u_t = (u^m)_xx on the line.
inline Environment reaction_free(double m) {
  return Environment(m, PeriodicCoefficient(1.0), monostable(poly({0.0})));
}

/// f = u, kappa = 1 + amp cos(2 pi x + phase).
inline Environment kpp(double amp, double m = 2.0, double phase = 0.0) {
  return Environment(m, PeriodicCoefficient(1.0, amp == 0.0 ? std::vector<Harmonic>{} : std::vector<Harmonic>{{amp, 1, phase}}),
                     monostable(poly({0.0, 1.0})));
}

}  // namespace sharpwave::testing
