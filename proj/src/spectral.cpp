#include "nsbf/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// Runs f(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(int count, int threads, F&& f) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Bracket {
  double a, b, sa, sb;
};

EigResult refine(const SolutionModel& m, Bracket br, Representation rep) {
  EigResult r;
  auto s = [&](double w) { return char_function(m, w, rep); };
  if (br.sa == 0.0 || br.sb == 0.0) {
    r.omega = br.sa == 0.0 ? br.a : br.b;
    r.bracket = 0.0;
  } else {
    while (br.b - br.a > 1e-13 * std::max(1.0, br.b)) {
      const double mid = 0.5 * (br.a + br.b);
      if (mid <= br.a || mid >= br.b) break;
      const double sm = s(mid);
      if (sm == 0.0) {
        br = {mid, mid, 0.0, 0.0};
        break;
      }
      if ((sm < 0.0) == (br.sa < 0.0)) {
        br.a = mid;
        br.sa = sm;
      } else {
        br.b = mid;
        br.sb = sm;
      }
    }
    r.bracket = br.b - br.a;
    r.omega = 0.5 * (br.a + br.b);
    if (br.sa != br.sb) {
      const double secant = br.a - br.sa * (br.b - br.a) / (br.sb - br.sa);
      if (secant >= br.a && secant <= br.b) r.omega = secant;
    }
  }
  r.lambda = r.omega * r.omega;
  r.residual = std::fabs(s(r.omega));
  return r;
}

// Sturm count: zeros of s(0, x) = f1 inside (0, b) are the negative
// eigenvalues; f1(b) = 0 adds lambda = 0.
int nonpositive_count(const SolutionModel& m) {
  const auto& phi1 = m.formal_powers().phi[1];
  int count = 0;
  double prev = 0.0;
  for (std::size_t j = 1; j < phi1.size(); ++j) {
    const double v = to_double(phi1[j].real());
    if (v == 0.0) continue;
    if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) ++count;
    prev = v;
  }
  if (to_double(phi1.back().real()) == 0.0) ++count;
  return count;
}

}  // namespace

double char_function(const SolutionModel& m, double omega, Representation rep) {
  if (omega == 0.0) throw ZeroOmegaError();
  if (!m.real_potential()) throw InvalidArgument("char_function: complex potentials are not supported");
  return sine_solution(m, omega, m.grid().M, rep).real();
}

EigReport find_eigenvalues(const SolutionModel& m, int count, const EigOptions& options) {
  if (count < 1) throw InvalidArgument("find_eigenvalues: count must be at least 1");
  if (!m.real_potential()) throw InvalidArgument("find_eigenvalues: complex potentials are not supported");
  const double b = m.grid().b;
  const double spacing = std::numbers::pi / b;
  const double h = options.h_scan > 0.0 ? options.h_scan : spacing / 4.0;
  if (h > spacing / 2.0 * (1.0 + 1e-12))
    throw InvalidArgument("find_eigenvalues: h_scan exceeds half the asymptotic root spacing pi/b");
  const double lo = options.omega_lo > 0.0 ? options.omega_lo : 1e-6 * spacing;
  if (options.omega_lo < 0.0 || (options.omega_hi > 0.0 && options.omega_hi <= lo))
    throw InvalidArgument("find_eigenvalues: need 0 < omega_lo < omega_hi");

  EigReport report;
  report.index_offset = nonpositive_count(m);
  if (report.index_offset > 0)
    report.warnings.push_back("s(omega, b) has " + std::to_string(report.index_offset) +
                              " eigenvalue(s) at or below 0; indices start at " +
                              std::to_string(report.index_offset + 1));

  double q_sup = 0.0;
  for (const auto& v : m.potential().q.values) q_sup = std::max(q_sup, to_double(xabs(v)));
  const bool fixed_hi = options.omega_hi > 0.0;
  // Asymptotically omega_n ~ n pi / b; sqrt(sup|q|) covers the shift.
  double hi = fixed_hi ? options.omega_hi : (count + report.index_offset + 2) * spacing + std::sqrt(q_sup) + 4.0 * h;
  const double hard_limit = fixed_hi ? hi : 4.0 * hi + 100.0 * spacing;

  std::vector<Bracket> brackets;
  double w_prev = lo;
  double s_prev = char_function(m, lo, options.rep);
  while (true) {
    const int points = std::max(1, static_cast<int>(std::ceil((hi - w_prev) / h)));
    std::vector<double> ws(static_cast<std::size_t>(points)), ss(ws.size());
    for (int k = 0; k < points; ++k) ws[static_cast<std::size_t>(k)] = std::min(hi, w_prev + (k + 1) * h);
    parallel_for(points, options.threads,
                 [&](int k) { ss[static_cast<std::size_t>(k)] = char_function(m, ws[static_cast<std::size_t>(k)], options.rep); });
    for (int k = 0; k < points; ++k) {
      const double w = ws[static_cast<std::size_t>(k)], s = ss[static_cast<std::size_t>(k)];
      if (s_prev == 0.0) {
        // already recorded as a right endpoint
      } else if (s == 0.0 || (s < 0.0) != (s_prev < 0.0)) {
        brackets.push_back({w_prev, w, s_prev, s});
      }
      w_prev = w;
      s_prev = s;
    }
    if (static_cast<int>(brackets.size()) >= count) break;
    if (fixed_hi || hi >= hard_limit)
      throw RangeExhausted("find_eigenvalues: found " + std::to_string(brackets.size()) + " of " +
                           std::to_string(count) + " roots below omega = " + std::to_string(hi));
    hi = std::min(hard_limit, hi + (count - static_cast<int>(brackets.size()) + 2) * spacing);
  }
  brackets.resize(static_cast<std::size_t>(count));

  std::vector<EigResult> results(brackets.size());
  parallel_for(count, options.threads,
               [&](int i) { results[static_cast<std::size_t>(i)] = refine(m, brackets[static_cast<std::size_t>(i)], options.rep); });
  std::sort(results.begin(), results.end(), [](const EigResult& x, const EigResult& y) { return x.omega < y.omega; });
  for (int i = 0; i < count; ++i) results[static_cast<std::size_t>(i)].n = report.index_offset + i + 1;

  // Root spacing in omega tends to pi/b once omega^2 dominates q.
  for (int i = 1; i < count; ++i) {
    const auto& p = results[static_cast<std::size_t>(i - 1)];
    const auto& c = results[static_cast<std::size_t>(i)];
    if (p.omega * p.omega <= q_sup) continue;
    const double gap = c.omega - p.omega;
    if (std::fabs(gap - spacing) > 0.25 * spacing) {
      report.warnings.push_back("possible missed root between indices " + std::to_string(p.n) + " and " +
                                std::to_string(c.n) + ": omega gap " + std::to_string(gap) +
                                " vs expected " + std::to_string(spacing));
    }
  }
  report.eigenvalues = std::move(results);
  return report;
}

double asymptotic_eigenvalue(int n, double Qb, double b) {
  if (n < 1) throw InvalidArgument("asymptotic_eigenvalue: n must be >= 1");
  if (std::fabs(b - std::numbers::pi) > 1e-12)
    throw UnsupportedInterval("asymptotic_eigenvalue: the formula is stated for b = pi only");
  const double v = n + Qb / (2.0 * std::numbers::pi * n);
  return v * v;
}

}  // namespace nsbf
