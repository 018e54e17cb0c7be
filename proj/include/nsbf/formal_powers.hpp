#pragma once

#include <vector>

#include "nsbf/grid.hpp"

namespace nsbf {

/// Minimum |f0| on the grid for the direct construction; below it the
/// nonvanishing f = f0 + i f1 route is used.
inline constexpr double kDirectRouteThreshold = 1e-3;
/// Minimum |f| tolerated by the nonvanishing route.
inline constexpr double kNonvanishingThreshold = 1e-6;

/// X^(n) and X~^(n), n = 0..K_max, as rows of samples.
struct RecursiveIntegrals {
  std::vector<std::vector<xcomplex>> X;
  std::vector<std::vector<xcomplex>> Xt;
};

/// X^(0) = X~^(0) = 1,
/// X^(n)  = n int_0^x X^(n-1)  (f^2)^{(-1)^n},
/// X~^(n) = n int_0^x X~^(n-1) (f^2)^{(-1)^(n-1)}.
/// Throws NearZeroError when min|f| <= min_abs.
RecursiveIntegrals recursive_integrals(const SampledFunction& f, int K_max,
                                       double min_abs = kDirectRouteThreshold);

/// Formal powers phi_k(x_j), k = 0..K_max.
struct FormalPowersTable {
  Grid grid;
  int K_max = 0;
  std::vector<std::vector<xcomplex>> phi;  // phi[k][j]
  /// x^k pushed through the same quadrature (the formal powers of q = 0 on
  /// this grid). Coefficient formulas subtract these instead of exact powers
  /// so that the shared quadrature error cancels.
  std::vector<std::vector<xcomplex>> monomial;
  bool nonvanishing_route = false;
  /// f'(0) of the solution the powers were generated from (0 for f0, i for
  /// f0 + i f1).
  cplx fprime0{0.0, 0.0};

  cplx operator()(int k, int j) const { return to_cplx(phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]); }
  const xcomplex& x(int k, int j) const { return phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; }
};

/// k int_0^x t^(k-1) dt by the grid quadrature, k = 0..K_max.
std::vector<std::vector<xcomplex>> grid_monomials(const Grid& g, int K_max);

/// phi_k = f0 X^(k) for odd k, f0 X~^(k) for even k.
FormalPowersTable formal_powers(const SampledFunction& f0, int K_max);

/// Builds Phi_k from f = f0 + i f1 and converts:
/// phi_k = Phi_k (k odd), Phi_k - f'(0)/(k+1) Phi_{k+1} (k even), f'(0) = i.
FormalPowersTable formal_powers_nonvanishing(const SampledFunction& f0, const SampledFunction& f1,
                                             int K_max);

/// Direct route when min|f0| > kDirectRouteThreshold, nonvanishing route
/// otherwise.
FormalPowersTable formal_powers_auto(const SampledFunction& f0, const SampledFunction& f1,
                                     int K_max);

/// Partial SPPS sum  sum_{n=0}^{K_trunc} (i omega)^n phi_n(x_j) / n!.
cplx spps_eval(const FormalPowersTable& table, cplx omega, int j, int K_trunc);

}  // namespace nsbf
