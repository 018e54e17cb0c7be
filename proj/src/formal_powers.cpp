#include "nsbf/formal_powers.hpp"

#include <algorithm>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf {

RecursiveIntegrals recursive_integrals(const SampledFunction& f, int K_max, double min_abs) {
  if (K_max < 0) throw InvalidArgument("recursive_integrals: K_max must be non-negative");
  const auto [smallest, at] = f.min_abs();
  if (!(smallest > min_abs))
    throw NearZeroError("solution too close to zero (|f| = " + std::to_string(smallest) +
                            " at x = " + std::to_string(f.grid.node(at)) + ")",
                        smallest, f.grid.node(at));

  const Grid& g = f.grid;
  const auto n_nodes = static_cast<std::size_t>(g.size());
  std::vector<xcomplex> f2(n_nodes), inv_f2(n_nodes);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    f2[j] = f.values[j] * f.values[j];
    inv_f2[j] = xreal(1) / f2[j];
  }

  RecursiveIntegrals r;
  r.X.assign(static_cast<std::size_t>(K_max) + 1, std::vector<xcomplex>(n_nodes));
  r.Xt.assign(static_cast<std::size_t>(K_max) + 1, std::vector<xcomplex>(n_nodes));
  std::fill(r.X[0].begin(), r.X[0].end(), xcomplex(1));
  std::fill(r.Xt[0].begin(), r.Xt[0].end(), xcomplex(1));

  std::vector<xcomplex> a(n_nodes), b(n_nodes);
  for (int n = 1; n <= K_max; ++n) {
    const auto& wX = (n % 2 == 0) ? f2 : inv_f2;
    const auto& wXt = (n % 2 == 0) ? inv_f2 : f2;
    const auto& prevX = r.X[static_cast<std::size_t>(n - 1)];
    const auto& prevXt = r.Xt[static_cast<std::size_t>(n - 1)];
    for (std::size_t j = 0; j < n_nodes; ++j) {
      a[j] = xreal(n) * prevX[j] * wX[j];
      b[j] = xreal(n) * prevXt[j] * wXt[j];
    }
    indefinite_integral(g, a, r.X[static_cast<std::size_t>(n)]);
    indefinite_integral(g, b, r.Xt[static_cast<std::size_t>(n)]);
  }
  return r;
}

std::vector<std::vector<xcomplex>> grid_monomials(const Grid& g, int K_max) {
  const auto n_nodes = static_cast<std::size_t>(g.size());
  std::vector<std::vector<xcomplex>> m(static_cast<std::size_t>(K_max) + 1, std::vector<xcomplex>(n_nodes));
  std::fill(m[0].begin(), m[0].end(), xcomplex(1));
  std::vector<xcomplex> a(n_nodes);
  // Same arithmetic as recursive_integrals with f = 1, so that q = 0 gives
  // phi_k == monomial_k bit for bit.
  for (int n = 1; n <= K_max; ++n) {
    const auto& prev = m[static_cast<std::size_t>(n - 1)];
    for (std::size_t j = 0; j < n_nodes; ++j) a[j] = xreal(n) * prev[j] * xcomplex(1);
    indefinite_integral(g, a, m[static_cast<std::size_t>(n)]);
  }
  return m;
}

namespace {

FormalPowersTable assemble(const SampledFunction& f, const RecursiveIntegrals& r, int K_max) {
  FormalPowersTable t;
  t.grid = f.grid;
  t.K_max = K_max;
  t.phi.resize(static_cast<std::size_t>(K_max) + 1);
  for (int k = 0; k <= K_max; ++k) {
    const auto& src = (k % 2 == 1) ? r.X[static_cast<std::size_t>(k)] : r.Xt[static_cast<std::size_t>(k)];
    auto& row = t.phi[static_cast<std::size_t>(k)];
    row.resize(src.size());
    for (std::size_t j = 0; j < src.size(); ++j) row[j] = f.values[j] * src[j];
  }
  t.monomial = grid_monomials(f.grid, K_max);
  return t;
}

}  // namespace

FormalPowersTable formal_powers(const SampledFunction& f0, int K_max) {
  return assemble(f0, recursive_integrals(f0, K_max, kDirectRouteThreshold), K_max);
}

FormalPowersTable formal_powers_nonvanishing(const SampledFunction& f0, const SampledFunction& f1,
                                             int K_max) {
  if (!(f0.grid == f1.grid)) throw InvalidArgument("formal_powers_nonvanishing: grid mismatch");
  SampledFunction f(f0.grid);
  const xcomplex i_unit(0, 1);
  for (int j = 0; j < f.size(); ++j) f[j] = f0[j] + i_unit * f1[j];

  const FormalPowersTable Phi = assemble(f, recursive_integrals(f, K_max + 1, kNonvanishingThreshold), K_max + 1);

  FormalPowersTable t;
  t.grid = f0.grid;
  t.K_max = K_max;
  t.nonvanishing_route = true;
  t.fprime0 = cplx(0.0, 1.0);
  t.phi.resize(static_cast<std::size_t>(K_max) + 1);
  for (int k = 0; k <= K_max; ++k) {
    const auto& cur = Phi.phi[static_cast<std::size_t>(k)];
    auto& row = t.phi[static_cast<std::size_t>(k)];
    if (k % 2 == 1) {
      row = cur;
      continue;
    }
    const auto& next = Phi.phi[static_cast<std::size_t>(k) + 1];
    const xcomplex c = i_unit / xreal(k + 1);
    row.resize(cur.size());
    for (std::size_t j = 0; j < cur.size(); ++j) row[j] = cur[j] - c * next[j];
  }
  t.monomial = Phi.monomial;
  t.monomial.resize(static_cast<std::size_t>(K_max) + 1);
  return t;
}

FormalPowersTable formal_powers_auto(const SampledFunction& f0, const SampledFunction& f1, int K_max) {
  if (f0.min_abs().first > kDirectRouteThreshold) return formal_powers(f0, K_max);
  return formal_powers_nonvanishing(f0, f1, K_max);
}

cplx spps_eval(const FormalPowersTable& table, cplx omega, int j, int K_trunc) {
  if (K_trunc > table.K_max || K_trunc < 0)
    throw InvalidArgument("spps_eval: truncation exceeds the formal-power table");
  const xcomplex iw = xcomplex(0, 1) * to_x(omega);
  xcomplex term(1), sum(0);
  for (int n = 0; n <= K_trunc; ++n) {
    if (n > 0) term *= iw / xreal(n);
    sum += term * table.x(n, j);
  }
  return to_cplx(sum);
}

}  // namespace nsbf
