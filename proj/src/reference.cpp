#include "nsbf/reference.hpp"

#include <array>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

namespace ode = boost::numeric::odeint;

// Integrates y' = f(t, y) from 0 to t_end with the controlled RKF78 stepper.
// Steps are capped at dt_max: the error estimate of an embedded pair can
// alias when a step spans several oscillation periods.
template <std::size_t Dim, class System>
std::array<double, Dim> integrate(System&& sys, std::array<double, Dim> y, double t_end,
                                  const ReferenceOptions& opt, double dt_max) {
  double dt = dt_max;
  using State = std::array<double, Dim>;
  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(opt.tol, opt.tol);
  double t = 0.0;
  long steps = 0;
  while (t < t_end) {
    if (t + dt > t_end) dt = t_end - t;
    if (stepper.try_step(sys, y, t, dt) == ode::success) ++steps;
    dt = std::min(dt, dt_max);
    if (steps + 1 > opt.max_steps) throw OracleError("reference integrator: step limit reached");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw OracleError("reference integrator: step size collapsed");
    for (double v : y)
      if (!std::isfinite(v)) throw OracleError("reference integrator: non-finite state");
  }
  return y;
}

}  // namespace

cplx reference_solution(const PotentialFn& q, cplx omega, double x, const ReferenceOptions& opt) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("reference_solution: x must be >= 0");
  if (x == 0.0) return 1.0;
  const cplx I(0.0, 1.0);
  if (std::abs(omega) < 1.0) {
    // (u, u') with u'' = (q - w^2) u
    auto sys = [&](const std::array<double, 4>& y, std::array<double, 4>& d, double t) {
      const cplx u(y[0], y[1]);
      const cplx du2 = (q(t) - omega * omega) * u;
      d = {y[2], y[3], du2.real(), du2.imag()};
    };
    const cplx du0 = I * omega;
    auto y = integrate<4>(sys, {1.0, 0.0, du0.real(), du0.imag()}, x, opt, 0.01);
    return {y[0], y[1]};
  }
  // A' = q u e^{-iwt} / (2iw), B' = -q u e^{iwt} / (2iw)
  auto sys = [&](const std::array<double, 4>& y, std::array<double, 4>& d, double t) {
    const cplx A(y[0], y[1]), B(y[2], y[3]);
    const cplx ep = std::exp(I * omega * t), em = std::exp(-I * omega * t);
    const cplx f = q(t) * (A * ep + B * em) / (2.0 * I * omega);
    const cplx dA = f * em, dB = -f * ep;
    d = {dA.real(), dA.imag(), dB.real(), dB.imag()};
  };
  auto y = integrate<4>(sys, {1.0, 0.0, 0.0, 0.0}, x, opt, std::min(0.01, 0.25 / std::abs(omega)));
  const cplx A(y[0], y[1]), B(y[2], y[3]);
  return A * std::exp(I * omega * x) + B * std::exp(-I * omega * x);
}

double reference_eigenvalue(const std::function<double(double)>& q, double b, int n, const ReferenceOptions& opt) {
  if (n < 1) throw InvalidArgument("reference_eigenvalue: index must be >= 1");
  if (!(b > 0.0)) throw InvalidArgument("reference_eigenvalue: b must be positive");
  const double pi = std::acos(-1.0);
  // theta(b) - n pi, with theta = omega x + phi and phi' = -(q/omega) sin^2(theta).
  auto mismatch = [&](double omega) {
    auto sys = [&](const std::array<double, 1>& y, std::array<double, 1>& d, double t) {
      const double s = std::sin(omega * t + y[0]);
      d[0] = -q(t) / omega * s * s;
    };
    auto y = integrate<1>(sys, {0.0}, b, opt, std::min(0.01, 0.25 / omega));
    return omega * b + y[0] - n * pi;
  };
  const double spacing = pi / b;
  double lo = n * spacing, hi = lo;
  double f_lo = mismatch(lo), f_hi = f_lo;
  const double step = 0.25 * spacing;
  for (int tries = 0; f_lo > 0.0; ++tries) {
    if (tries > 400 || lo - step <= 0.0) throw OracleError("reference_eigenvalue: no bracket below index " + std::to_string(n));
    hi = lo;
    f_hi = f_lo;
    lo -= step;
    f_lo = mismatch(lo);
  }
  for (int tries = 0; f_hi < 0.0; ++tries) {
    if (tries > 400) throw OracleError("reference_eigenvalue: no bracket above index " + std::to_string(n));
    lo = hi;
    f_lo = f_hi;
    hi += step;
    f_hi = mismatch(hi);
  }
  if (f_lo == 0.0) return lo * lo;
  if (f_hi == 0.0) return hi * hi;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(mismatch, lo, hi, f_lo, f_hi,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  const double omega = 0.5 * (r.first + r.second);
  return omega * omega;
}

std::vector<double> reference_eigenvalues(const std::function<double(double)>& q, double b, int count, int threads,
                                          const ReferenceOptions& opt) {
  if (count < 1) throw InvalidArgument("reference_eigenvalues: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  std::atomic<int> next{1};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int n = next++; n <= count; n = next++) {
      try {
        out[static_cast<std::size_t>(n - 1)] = reference_eigenvalue(q, b, n, opt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace nsbf
