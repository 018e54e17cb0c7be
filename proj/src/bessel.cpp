#include "nsbf/bessel.hpp"

#include <cmath>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// j_n(z) ~ z^n/(2n+1)!! (1 - z^2/(2(2n+3)))
void small_argument_series(int N, cplx z, std::vector<cplx>& out) {
  cplx lead(1.0, 0.0);
  double double_factorial = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) {
      double_factorial *= 2.0 * n + 1.0;
      lead *= z;
    }
    out[static_cast<std::size_t>(n)] = lead / double_factorial * (1.0 - z * z / (2.0 * (2.0 * n + 3.0)));
  }
}

cplx j0_closed(cplx z) { return std::sin(z) / z; }
cplx j1_closed(cplx z) { return std::sin(z) / (z * z) - std::cos(z) / z; }

}  // namespace

void spherical_j_into(int N, cplx z, std::vector<cplx>& out) {
  if (N < 0) throw InvalidArgument("spherical_j: negative order");
  if (N > kMaxBesselOrder)
    throw LimitError("spherical_j: order " + std::to_string(N) + " exceeds " + std::to_string(kMaxBesselOrder));
  if (std::fabs(z.imag()) > kMaxBesselImag)
    throw EvaluationError("spherical_j: |Im z| exceeds the overflow guard of 700");
  out.assign(static_cast<std::size_t>(N) + 1, cplx(0.0, 0.0));

  const double az = std::abs(z);
  if (az == 0.0) {
    out[0] = 1.0;
    return;
  }
  if (az < 1e-8) {
    small_argument_series(N, z, out);
    return;
  }

  // Upward part: 0..n_up with n_up = min(N, floor|z|).
  const int n_up = std::min(N, static_cast<int>(std::floor(az)));
  out[0] = j0_closed(z);
  if (N == 0) return;
  if (n_up >= 1) {
    out[1] = j1_closed(z);
    for (int n = 1; n < n_up; ++n)
      out[static_cast<std::size_t>(n) + 1] = (2.0 * n + 1.0) / z * out[static_cast<std::size_t>(n)] - out[static_cast<std::size_t>(n) - 1];
  }
  if (n_up == N) return;

  // Downward ratios r_n = j_n / j_{n-1} for n = n_up+1..N:
  //   r_n = 1 / ((2n+1)/z - r_{n+1}), started from r_L = 0.
  const int start = N + static_cast<int>(std::ceil(15.0 + az));
  cplx r(0.0, 0.0);
  std::vector<cplx> ratio(static_cast<std::size_t>(N) + 2);
  for (int n = start; n > n_up; --n) {
    r = 1.0 / ((2.0 * n + 1.0) / z - r);
    if (n <= N) ratio[static_cast<std::size_t>(n)] = r;
  }
  for (int n = n_up + 1; n <= N; ++n)
    out[static_cast<std::size_t>(n)] = out[static_cast<std::size_t>(n) - 1] * ratio[static_cast<std::size_t>(n)];
}

BesselSequence spherical_j_sequence(int N, cplx z) {
  BesselSequence s{z, {}};
  spherical_j_into(N, z, s.values);
  return s;
}

}  // namespace nsbf
