#pragma once
// Shared fixtures for the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <numbers>

#include "nsbf/expr.hpp"
#include "nsbf/solution.hpp"

namespace nsbf::test {

inline constexpr double pi = std::numbers::pi;

inline double rel_diff(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Built once per process: the models are the expensive part of most tests.
inline const SolutionModel& exp_model() {
  static const SolutionModel m = build_model(parse("exp(x)"), pi, 1998);
  return m;
}
inline const SolutionModel& zero_model() {
  static const SolutionModel m = build_model(parse("0"), pi, 1998);
  return m;
}
inline const SolutionModel& one_model() {
  static const SolutionModel m = build_model(parse("1"), pi, 1998);
  return m;
}

/// u for q = 1 with u(0) = 1, u'(0) = i w: cos(kx) + i w sin(kx)/k, k^2 = w^2 - 1.
inline cplx constant_one_solution(cplx w, double x) {
  const cplx k = std::sqrt(w * w - 1.0);
  return std::cos(k * x) + cplx(0, 1) * w * std::sin(k * x) / k;
}

}  // namespace nsbf::test
