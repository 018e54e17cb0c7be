#pragma once

#include <vector>

#include "nsbf/precision.hpp"

namespace nsbf {

inline constexpr int kMaxBesselOrder = 120;
inline constexpr double kMaxBesselImag = 700.0;

/// j_0(z) .. j_N(z).
struct BesselSequence {
  cplx z;
  std::vector<cplx> values;

  const cplx& operator[](int n) const { return values[static_cast<std::size_t>(n)]; }
};

/// Spherical Bessel functions of the first kind for complex argument.
///
/// Orders n <= |z| come from upward recurrence off the closed forms of j_0
/// and j_1, where it is stable. Higher orders come from ratios
/// j_n/j_{n-1} obtained by downward (Miller) recurrence started at order
/// N + ceil(15 + |z|), chained onto the last upward value. Because every
/// zero of j_n lies beyond n, the anchor j_{floor|z|} is never near a zero.
/// |z| < 1e-8 uses the two-term power series.
///
/// Throws LimitError for N > 120 and EvaluationError for |Im z| > 700.
BesselSequence spherical_j_sequence(int N, cplx z);

/// Writes j_0(z)..j_N(z) into `out` (size N+1), without allocating.
void spherical_j_into(int N, cplx z, std::vector<cplx>& out);

}  // namespace nsbf
