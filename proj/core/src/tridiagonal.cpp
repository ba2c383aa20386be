#include "sharpwave/tridiagonal.hpp"

#include <stdexcept>

namespace sharpwave {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c(n);
  double denom = diag[0];
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw std::invalid_argument("cyclic tridiagonal system needs n >= 3");
  const double alpha = upper[n - 1];  // A(n-1, 0)
  const double beta = lower[0];       // A(0, n-1)
  const double gamma = -diag[0];

  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;

  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;

  solve_tridiagonal(lower, d, upper, rhs);
  solve_tridiagonal(lower, d, upper, u);

  const double fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= fact * u[i];
}

}  // namespace sharpwave
