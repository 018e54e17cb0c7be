#include "nsbf/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf {

Grid make_grid(double b, int M) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("grid: b must be a positive finite number");
  if (M < 64) throw InvalidArgument("grid: M must be at least 64 (got " + std::to_string(M) + ")");
  if (M % 6 != 0)
    throw InvalidArgument("grid: M must be divisible by 6 (got " + std::to_string(M) + ")");
  return Grid{b, M};
}

SampledFunction::SampledFunction(Grid g, std::vector<xcomplex> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.size())
    throw InvalidArgument("sampled function: value count does not match grid");
}

double SampledFunction::sup_norm() const {
  xreal m = 0;
  for (const auto& v : values) m = std::max(m, xabs(v));
  return to_double(m);
}

std::pair<double, int> SampledFunction::min_abs() const {
  xreal m = xabs(values.front());
  int at = 0;
  for (int j = 1; j < size(); ++j) {
    const xreal a = xabs(values[static_cast<std::size_t>(j)]);
    if (a < m) {
      m = a;
      at = j;
    }
  }
  return {to_double(m), at};
}

SampledFunction sample(const Grid& g, const std::function<cplx(double)>& f) {
  SampledFunction s(g);
  for (int j = 0; j < g.size(); ++j) s[j] = to_x(f(g.node(j)));
  return s;
}

SampledFunction sample_real(const Grid& g, const std::function<double(double)>& f) {
  return sample(g, [&](double x) { return cplx(f(x), 0.0); });
}

const std::array<std::array<xreal, 7>, 7>& newton_cotes6_partial_weights() {
  static const auto weights = [] {
    std::array<std::array<xreal, 7>, 7> w{};
    for (int i = 0; i < 7; ++i) {
      // Coefficients of prod_{k != i} (s - k), lowest degree first; all
      // intermediate values are small integers, so this is exact.
      std::array<xreal, 8> c{};
      c[0] = 1;
      int degree = 0;
      xreal denom = 1;
      for (int k = 0; k < 7; ++k) {
        if (k == i) continue;
        for (int a = degree + 1; a > 0; --a) c[a] = c[a - 1] - xreal(k) * c[a];
        c[0] = -xreal(k) * c[0];
        ++degree;
        denom *= xreal(i - k);
      }
      for (int m = 1; m <= 6; ++m) {
        xreal sum = 0;
        xreal power = xreal(m);
        for (int a = 0; a <= degree; ++a) {
          sum += c[a] * power / xreal(a + 1);
          power *= xreal(m);
        }
        w[m][i] = sum / denom;
      }
    }
    return w;
  }();
  return weights;
}

void indefinite_integral(const Grid& g, std::span<const xcomplex> f, std::span<xcomplex> out) {
  if (static_cast<int>(f.size()) != g.size() || out.size() != f.size())
    throw InvalidArgument("indefinite_integral: grid mismatch");
  const auto& w = newton_cotes6_partial_weights();
  const xreal h = xreal(g.b) / xreal(g.M);
  out[0] = xcomplex(0);
  for (std::size_t start = 0; start + 6 < f.size(); start += 6) {
    const xcomplex base = out[start];
    for (int m = 1; m <= 6; ++m) {
      xcomplex s(0);
      for (int i = 0; i < 7; ++i) s += w[m][i] * f[start + i];
      out[start + m] = base + h * s;
    }
  }
}

SampledFunction indefinite_integral(const SampledFunction& f) {
  SampledFunction out(f.grid);
  indefinite_integral(f.grid, f.values, out.values);
  return out;
}

namespace {

// Sums g_0 + g_1 + ... with g_{m+1} = int_0^x int_0^s q g_m.
std::pair<SampledFunction, int> picard_series(const SampledFunction& q, SampledFunction g,
                                              double rel_tol, int max_iterations) {
  const Grid& grid = q.grid;
  SampledFunction sum = g;
  SampledFunction tmp(grid), inner(grid);
  for (int it = 1; it <= max_iterations; ++it) {
    for (int j = 0; j < grid.size(); ++j) tmp[j] = q[j] * g[j];
    indefinite_integral(grid, tmp.values, inner.values);
    indefinite_integral(grid, inner.values, g.values);
    xreal inc = 0, total = 0;
    for (int j = 0; j < grid.size(); ++j) {
      sum[j] += g[j];
      inc = std::max(inc, xabs(g[j]));
      total = std::max(total, xabs(sum[j]));
    }
    if (inc < xreal(rel_tol) * (1 + total)) return {std::move(sum), it};
  }
  throw ConvergenceError("Picard iteration did not converge in " + std::to_string(max_iterations) +
                         " iterations (interval too long or potential too large for the grid)");
}

}  // namespace

HomogeneousSolutions solve_homogeneous(const SampledFunction& q, double rel_tol, int max_iterations) {
  if (rel_tol <= 0.0) rel_tol = 64.0 * kExtendedEpsilon;
  const Grid& grid = q.grid;
  SampledFunction one(grid), x(grid);
  for (int j = 0; j < grid.size(); ++j) {
    one[j] = xcomplex(1);
    x[j] = xcomplex(grid.xnode(j));
  }
  auto [f0, it0] = picard_series(q, std::move(one), rel_tol, max_iterations);
  auto [f1, it1] = picard_series(q, std::move(x), rel_tol, max_iterations);
  return {std::move(f0), std::move(f1), std::max(it0, it1)};
}

namespace {

// Fornberg weights for the first derivative at offset `at` on nodes 0..6.
std::array<xreal, 7> first_derivative_weights(int at) {
  std::array<xreal, 7> w{};
  for (int i = 0; i < 7; ++i) {
    // L_i'(at) = sum_{k != i} 1/(i-k) * prod_{l != i,k} (at-l)/(i-l)
    xreal total = 0;
    for (int k = 0; k < 7; ++k) {
      if (k == i) continue;
      xreal term = xreal(1) / xreal(i - k);
      for (int l = 0; l < 7; ++l) {
        if (l == i || l == k) continue;
        term *= xreal(at - l) / xreal(i - l);
      }
      total += term;
    }
    w[static_cast<std::size_t>(i)] = total;
  }
  return w;
}

}  // namespace

SampledFunction derivative6(const SampledFunction& f) {
  const Grid& g = f.grid;
  static const auto stencils = [] {
    std::array<std::array<xreal, 7>, 7> s{};
    for (int at = 0; at < 7; ++at) s[static_cast<std::size_t>(at)] = first_derivative_weights(at);
    return s;
  }();
  const xreal h = xreal(g.b) / xreal(g.M);
  SampledFunction d(g);
  for (int j = 0; j <= g.M; ++j) {
    const int start = std::clamp(j - 3, 0, g.M - 6);
    const auto& w = stencils[static_cast<std::size_t>(j - start)];
    xcomplex s(0);
    for (int i = 0; i < 7; ++i) s += w[static_cast<std::size_t>(i)] * f[start + i];
    d[j] = s / h;
  }
  return d;
}

}  // namespace nsbf
