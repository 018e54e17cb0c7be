#pragma once

#include <cstdint>
#include <vector>

#include "nsbf/formal_powers.hpp"
#include "nsbf/grid.hpp"

namespace nsbf {

inline constexpr int kMaxLegendreDegree = 120;
inline constexpr int kMaxTruncation = 60;
/// A sum is flagged when sum_k |term_k| exceeds this multiple of |result|.
inline constexpr double kCancellationRatio = 1e8;

/// l[n][k] = coefficient of x^k in P_n(x), 0 <= k <= n <= N_max.
struct LegendreCoeffs {
  int N_max = 0;
  std::vector<std::vector<xreal>> l;

  double operator()(int n, int k) const { return to_double(l[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]); }
  const xreal& x(int n, int k) const { return l[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]; }
};

/// Bonnet recurrence (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1} on coefficient
/// arrays. Throws LimitError above degree 120.
LegendreCoeffs legendre_coeffs(int N_max);

/// Quantities derived from q alone.
struct PotentialData {
  Grid grid;
  SampledFunction q;
  SampledFunction Q;       // int_0^x q
  SampledFunction Q2;      // int_0^x q^2
  SampledFunction dq;      // q' by 6th-order finite differences
  SampledFunction qplus;   // q/4 - Q^2/8 + q(0)/4
  SampledFunction qminus;  // q/4 - Q^2/8 - q(0)/4
  xcomplex q0{0};

  /// Coefficients at nodes below this abscissa are replaced by their x -> 0
  /// limit (zero).
  double x_min() const noexcept { return grid.b / 100.0; }
};

PotentialData potential_data(const SampledFunction& q);

/// Rows of coefficient samples, row n holding c_n(x_j).
struct CoefficientTable {
  Grid grid;
  std::vector<std::vector<xcomplex>> rows;
  /// Per (n, j) cancellation diagnostic; empty rows when not tracked.
  std::vector<std::vector<std::uint8_t>> cancellation;

  int row_count() const noexcept { return static_cast<int>(rows.size()); }
  cplx operator()(int n, int j) const { return to_cplx(rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)]); }
  const xcomplex& x(int n, int j) const { return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)]; }
  std::size_t flagged_count() const;
};

using BetaTable = CoefficientTable;
using MomentTable = CoefficientTable;
using AlphaTable = CoefficientTable;

/// beta_n(x) = (2n+1)/2 (sum_k l_{k,n} phi_k(x)/x^k - 1), n = 0..N, with
/// compensated summation. The -1 is written as sum_k l_{k,n} x^k/x^k with
/// the quadrature monomials in place of x^k, which removes the common
/// quadrature error; for q = 0 every row is exactly zero.
BetaTable beta_coeffs(const FormalPowersTable& phi, const LegendreCoeffs& l, int N,
                      double x_min);

/// Raw noise of the Legendre sums on this grid: the plain beta formula
/// applied to the quadrature monomials against exact powers. It measures how
/// badly degree-n polynomials are resolved at each node and grows quickly in
/// n as x -> 0.
BetaTable monomial_noise(const FormalPowersTable& phi, const LegendreCoeffs& l, int N, double x_min);

/// Noise levels below this are extended round-off, not discretization.
inline constexpr double kNoiseFloorMinimum = 1e-20;

/// Per node, the number of leading beta rows that are resolved: the first n
/// at which |beta_n| and |beta_{n+1}| both sit at or below the monomial
/// noise. Requiring two consecutive rows keeps isolated zero crossings from
/// truncating the series.
std::vector<int> resolved_rows(const BetaTable& beta, const BetaTable& noise);

/// k_n(x) = int_{-x}^{x} K_22(x,t) t^n dt from the closed forms in q, Q and
/// phi_{n-2}.
std::vector<xcomplex> moment_row(const PotentialData& pd, const FormalPowersTable& phi, int n);
MomentTable moments(const PotentialData& pd, const FormalPowersTable& phi, int n_max);

/// alpha_0..alpha_3 from the closed forms in q_+, q_-, Q, phi_0, phi_1.
AlphaTable alpha_seed(const PotentialData& pd, const FormalPowersTable& phi);

/// alpha_n(x) = (2n+1)/2 sum_m l_{m,n} k_m(x)/x^m. Flags are written to
/// `flags` when non-null.
std::vector<xcomplex> alpha_direct(const MomentTable& k, const LegendreCoeffs& l, int n,
                                   double x_min, std::vector<std::uint8_t>* flags = nullptr);

/// Appends row n >= 4 to `alpha` using
/// alpha_n = (2n-1)(2n+1)(beta_{n-2}/x^2 + 2 alpha_{n-2}/((2n-5)(2n-1))
///                         - alpha_{n-4}/((2n-7)(2n-5))).
/// Requires alpha rows 0..n-1 and beta row n-2.
void alpha_recurrence(const BetaTable& beta, AlphaTable& alpha, int n, double x_min);

/// Seeds plus recurrence up to row n_max (needs beta rows up to n_max-2).
AlphaTable alpha_table(const PotentialData& pd, const FormalPowersTable& phi, const BetaTable& beta,
                       int n_max);

/// eps1 = |K_22(x,x) - (1/x) sum_{n<=N} alpha_n|,
/// eps2 = |K_22(x,-x) - (1/x) sum_{n<=N} (-1)^n alpha_n|,
/// with K_22(x,x) = (q' - qQ - int q^2 + Q^3/6)/8 and
/// K_22(x,-x) = (q'(0) + q(0)Q)/8. NaN below x_min.
struct AccuracyIndicators {
  std::vector<double> eps1;
  std::vector<double> eps2;
};

AccuracyIndicators accuracy_indicators(const PotentialData& pd, const AlphaTable& alpha, int N);

}  // namespace nsbf
