#include "sharpwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpwave/error.hpp"

namespace sharpwave {

ProfilePair ProfilePair::from_snapshots(const Snapshot& a, const Snapshot& b) {
  if (std::abs(a.dx - b.dx) > 1e-15) throw DomainError("diagnostics: snapshots live on different grids");
  const long lo = std::max(a.first_index, b.first_index);
  const long hi = std::max(a.first_index + static_cast<long>(a.v.size()), b.first_index + static_cast<long>(b.v.size())) - 1;
  ProfilePair p;
  p.dx = a.dx;
  p.x0 = static_cast<double>(lo) * a.dx;
  for (long g = lo; g <= hi; ++g) {
    p.w1.push_back(a.at_index(g));
    p.w2.push_back(b.at_index(g));
  }
  p.r1 = a.b;
  p.r2 = b.b;
  return p;
}

namespace {

int sign_of(double d, double tol) {
  if (d > tol) return 1;
  if (d < -tol) return -1;
  return 0;
}

struct Support {
  bool unbounded_left = false;
  double l = 0.0;
  double r = 0.0;
  bool empty = true;
};

Support support_of(const ProfilePair& p, const std::vector<double>& w, const std::optional<double>& front) {
  Support s;
  std::size_t first = w.size(), last = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) {
      first = std::min(first, i);
      last = i;
    }
  if (first == w.size()) return s;
  s.empty = false;
  s.unbounded_left = first == 0;
  s.l = first == 0 ? -std::numeric_limits<double>::infinity() : p.x(first) - p.dx;
  s.r = front ? *front : p.x(last) + p.dx;
  return s;
}

// Nonzero signs of w1 - w2 on [l, r], sampled out to the first node past each end.
std::vector<int> interior_signs(const ProfilePair& p, double l, double r, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < p.w1.size(); ++i) {
    const double x = p.x(i);
    if (x <= l - p.dx || x >= r + p.dx) continue;
    const int s = sign_of(p.w1[i] - p.w2[i], tol);
    if (s != 0) out.push_back(s);
  }
  return out;
}

}  // namespace

int sign_changes(const ProfilePair& pair, double tol) {
  if (pair.w1.size() != pair.w2.size()) throw DomainError("sign_changes: grids are not aligned");
  const std::size_t n = pair.w1.size();
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (pair.w1[i] > 0.0 && pair.w2[i] > 0.0) {
      first = std::min(first, i);
      last = i;
    }
  if (first == n) return 0;
  // Closed interval: the node past each end sees the profile that already vanished.
  const std::size_t lo = first > 0 ? first - 1 : 0;
  const std::size_t hi = std::min(last + 1, n - 1);
  int count = 0;
  int prev = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const int s = sign_of(pair.w1[i] - pair.w2[i], tol);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::steeper: return "steeper";
    case Relation::touch_order: return "touch-order";
    case Relation::strict_order: return "strict-order";
    case Relation::other: return "other";
  }
  return "other";
}

Relation classify_relation(const ProfilePair& pair, double tol, double front_tol) {
  if (pair.w1.size() != pair.w2.size()) throw DomainError("classify_relation: grids are not aligned");
  const Support a = support_of(pair, pair.w1, pair.r1);
  const Support b = support_of(pair, pair.w2, pair.r2);
  if (a.empty || b.empty) return Relation::other;
  const double l = std::max(a.l, b.l);
  const double r = std::min(a.r, b.r);
  if (!(l < r)) return Relation::other;

  const auto signs = interior_signs(pair, l, r, tol);
  if (signs.empty()) return Relation::other;
  const bool all_positive = std::all_of(signs.begin(), signs.end(), [](int s) { return s > 0; });

  const bool both_unbounded = a.unbounded_left && b.unbounded_left;
  const bool left_equal = both_unbounded || (!a.unbounded_left && !b.unbounded_left && std::abs(a.l - b.l) <= front_tol);
  const bool left_below = both_unbounded || a.unbounded_left || a.l < b.l - front_tol;
  const bool right_equal = std::abs(a.r - b.r) <= front_tol;
  const bool right_beyond = a.r > b.r + front_tol;

  if (all_positive) {
    if (left_below && right_beyond) return Relation::strict_order;
    if ((right_equal && (left_below || left_equal)) || (left_equal && (right_equal || right_beyond)))
      return Relation::touch_order;
    return Relation::other;
  }
  int changes = 0;
  for (std::size_t i = 1; i < signs.size(); ++i)
    if (signs[i] != signs[i - 1]) ++changes;
  if (changes == 1 && signs.front() > 0) return Relation::steeper;
  return Relation::other;
}

double default_touch_tolerance(double dx, double front_slope) { return 10.0 * dx * std::max(front_slope, 0.0); }

IntersectionReport check_monotone_intersections(const std::vector<Snapshot>& run1, const std::vector<Snapshot>& run2,
                                                double tol, double front_tol) {
  if (run1.size() != run2.size()) throw DomainError("check_monotone_intersections: runs have different recordings");
  IntersectionReport rep;
  int prev = -1;
  for (std::size_t k = 0; k < run1.size(); ++k) {
    if (std::abs(run1[k].t - run2[k].t) > 1e-9 * std::max(1.0, std::abs(run1[k].t)))
      throw DomainError("check_monotone_intersections: recording times differ");
    ProfilePair p = ProfilePair::from_snapshots(run1[k], run2[k]);
    IntersectionRow row;
    row.t = run1[k].t;
    row.count = sign_changes(p, tol);
    row.relation = classify_relation(p, tol, front_tol);
    if (row.relation == Relation::other) {
      std::swap(p.w1, p.w2);
      std::swap(p.r1, p.r2);
      const Relation rev = classify_relation(p, tol, front_tol);
      if (rev != Relation::other) {
        row.relation = rev;
        row.reversed = true;
      }
    }
    if (prev >= 0 && row.count > prev) rep.nonincreasing = false;
    prev = row.count;
    auto mark = [&](std::optional<double>& slot) {
      if (!slot) slot = row.t;
    };
    if (row.relation == Relation::steeper) mark(rep.first_steeper);
    if (row.relation == Relation::touch_order) mark(rep.first_touch);
    if (row.relation == Relation::strict_order) mark(rep.first_strict);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sharpwave
