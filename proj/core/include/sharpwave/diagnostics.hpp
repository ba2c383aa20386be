#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharpwave/solver.hpp"

namespace sharpwave {

/// Two pressure profiles on a common grid x_i = x0 + i dx. A left end is
/// unbounded when the profile is positive at the first node.
struct ProfilePair {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> w1, w2;
  std::optional<double> r1, r2;  // sharp right fronts, if known

  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }

  /// Aligns two snapshots on their global node index (same dx required),
  /// using the fronts recorded with them.
  static ProfilePair from_snapshots(const Snapshot& a, const Snapshot& b);
};

/// Sign changes of w1 - w2 over the closed common positivity interval: the
/// nodes where both profiles are positive plus one node beyond each end.
/// Differences with |w1 - w2| <= tol carry no sign.
int sign_changes(const ProfilePair& pair, double tol);

enum class Relation { steeper, touch_order, strict_order, other };

std::string to_string(Relation r);

/// Case test of the pair (w1 relative to w2): single + to - crossing
/// (steeper), ordered with a shared end (touch_order), ordered with strictly
/// nested supports (strict_order). Fronts closer than front_tol count as equal.
Relation classify_relation(const ProfilePair& pair, double tol, double front_tol);

/// 10 dx C1, the touch threshold at the front-slope scale.
double default_touch_tolerance(double dx, double front_slope);

struct IntersectionRow {
  double t = 0.0;
  int count = 0;
  Relation relation = Relation::other;
  bool reversed = false;  // relation holds for (w2, w1)
};

struct IntersectionReport {
  std::vector<IntersectionRow> rows;
  bool nonincreasing = true;
  std::optional<double> first_steeper, first_touch, first_strict;
};

/// Sign-change counts along two runs recorded at the same times.
/// Throws DomainError when the recording times differ.
IntersectionReport check_monotone_intersections(const std::vector<Snapshot>& run1, const std::vector<Snapshot>& run2,
                                                double tol, double front_tol);

}  // namespace sharpwave
