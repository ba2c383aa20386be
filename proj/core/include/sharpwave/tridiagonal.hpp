#pragma once

#include <span>
#include <vector>

namespace sharpwave {

/// Solves a tridiagonal system in place with the Thomas algorithm.
/// lower[0] and upper[n-1] are ignored. `rhs` is overwritten by the solution.
/// Requires a diagonally dominant (or otherwise pivot-safe) matrix.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Cyclic variant: lower[0] couples row 0 to row n-1 and upper[n-1] couples
/// row n-1 to row 0 (Sherman-Morrison on top of the Thomas solve). n >= 3.
void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs);

}  // namespace sharpwave
