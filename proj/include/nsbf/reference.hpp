#pragma once

#include <functional>
#include <vector>

#include "nsbf/precision.hpp"

namespace nsbf {

/// Independent high-accuracy solver for -u'' + q u = omega^2 u, used as the
/// test and bench oracle. Adaptive Runge-Kutta-Fehlberg 7(8).
struct ReferenceOptions {
  double tol = 1e-12;
  long max_steps = 20'000'000;
};

using PotentialFn = std::function<cplx(double)>;

/// u(omega, x) with u(0) = 1, u'(0) = i omega. For |omega| >= 1 the state is
/// the modulated pair u = A e^{i w x} + B e^{-i w x}, which varies on the
/// scale of q rather than 1/omega; below that, (u, u') directly.
cplx reference_solution(const PotentialFn& q, cplx omega, double x, const ReferenceOptions& opt = {});

/// n-th Dirichlet eigenvalue (n >= 1) of -u'' + q u = lambda u on [0, b],
/// for real q and lambda > 0. Solves theta(b; omega) = n pi where theta is the
/// Prufer angle scaled by k = omega, integrated as phi = theta - omega x.
double reference_eigenvalue(const std::function<double(double)>& q, double b, int n,
                            const ReferenceOptions& opt = {});

/// Eigenvalues 1..count, computed on `threads` workers.
std::vector<double> reference_eigenvalues(const std::function<double(double)>& q, double b, int count,
                                          int threads = 1, const ReferenceOptions& opt = {});

}  // namespace nsbf
