#pragma once

// Scalar types. Evaluation runs in double; the formal-power and coefficient
// pipeline runs in an extended type because the Legendre sums for beta_n
// cancel by roughly 2.4^n.

#include <complex>
#include <limits>

#if defined(NSBF_HAVE_FLOAT128)
#include <quadmath.h>
#endif

namespace nsbf {

using cplx = std::complex<double>;

#if defined(NSBF_HAVE_FLOAT128)
using xreal = __float128;
inline constexpr double kExtendedEpsilon = 1.925929944387235853e-34;
inline xreal xsqrt(xreal v) { return sqrtq(v); }
inline xreal xfabs(xreal v) { return fabsq(v); }
#else
using xreal = long double;
inline constexpr double kExtendedEpsilon = std::numeric_limits<long double>::epsilon();
inline xreal xsqrt(xreal v) { return std::sqrt(v); }
inline xreal xfabs(xreal v) { return std::fabs(v); }
#endif

using xcomplex = std::complex<xreal>;

inline double to_double(xreal v) { return static_cast<double>(v); }
inline cplx to_cplx(const xcomplex& v) { return {to_double(v.real()), to_double(v.imag())}; }
inline xcomplex to_x(const cplx& v) { return {xreal(v.real()), xreal(v.imag())}; }

/// |z| in extended precision, without going through std::abs (which is not
/// specialised for __float128).
inline xreal xabs(const xcomplex& z) {
  const xreal a = xfabs(z.real());
  const xreal b = xfabs(z.imag());
  if (a == 0) return b;
  if (b == 0) return a;
  if (a > b) { const xreal r = b / a; return a * xsqrt(1 + r * r); }
  const xreal r = a / b;
  return b * xsqrt(1 + r * r);
}

/// pi correctly rounded in the extended type.
inline xreal xpi() {
#if defined(NSBF_HAVE_FLOAT128)
  static const xreal pi = strtoflt128("3.14159265358979323846264338327950288", nullptr);
  return pi;
#else
  return 3.141592653589793238462643383279502884L;
#endif
}

}  // namespace nsbf
