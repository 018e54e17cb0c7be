#pragma once

#include <string>
#include <vector>

#include "nsbf/solution.hpp"

namespace nsbf {

/// s(omega, b) for real q and real omega != 0: the solution with s(0) = 0,
/// s'(0) = 1 evaluated at the right end. Its positive zeros are the square
/// roots of the Dirichlet eigenvalues.
double char_function(const SolutionModel& m, double omega, Representation rep = Representation::Auto);

struct EigOptions {
  /// 0 picks 1e-6 * pi / b.
  double omega_lo = 0.0;
  /// 0 picks a bound from the asymptotic spacing and extends it as needed;
  /// a positive value is a hard limit.
  double omega_hi = 0.0;
  /// 0 picks pi / (4b); must not exceed pi / (2b).
  double h_scan = 0.0;
  Representation rep = Representation::Auto;
  int threads = 1;
};

struct EigResult {
  int n = 0;  ///< 1-based eigenvalue index
  double omega = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  ///< |s(omega_n, b)|
  double bracket = 0.0;   ///< bracket width when bisection stopped
};

struct EigReport {
  std::vector<EigResult> eigenvalues;
  /// Eigenvalues at or below zero, counted from the zeros of s(0, x) on
  /// (0, b). They are not computed, and the first index reported is
  /// index_offset + 1.
  int index_offset = 0;
  std::vector<std::string> warnings;
};

/// Scans s(omega, b) on a uniform omega grid for sign changes, bisects each
/// bracket to width 1e-13 max(1, omega) and applies one secant step.
/// Throws RangeExhausted when fewer than `count` roots lie below a fixed
/// omega_hi (or below the auto-extension limit).
EigReport find_eigenvalues(const SolutionModel& m, int count, const EigOptions& options = {});

/// (n + Qb / (2 pi n))^2, the large-n behaviour on [0, pi]. Throws
/// UnsupportedInterval unless b == pi.
double asymptotic_eigenvalue(int n, double Qb, double b);

}  // namespace nsbf
