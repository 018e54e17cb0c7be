#include "nsbf/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// Neumaier-compensated sum of one real component.
struct CompensatedReal {
  xreal sum = 0;
  xreal comp = 0;

  void add(xreal v) {
    const xreal t = sum + v;
    comp += (xfabs(sum) >= xfabs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  xreal value() const { return sum + comp; }
};

// Complex compensated sum that also tracks sum |term| for the cancellation
// diagnostic.
struct CompensatedSum {
  CompensatedReal re, im;
  xreal magnitude = 0;

  void add(const xcomplex& v) {
    re.add(v.real());
    im.add(v.imag());
    magnitude += xabs(v);
  }
  xcomplex value() const { return {re.value(), im.value()}; }
  bool cancelled() const { return magnitude > xreal(kCancellationRatio) * xabs(value()); }
};

void check_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw InvalidArgument(std::string(what) + ": grid mismatch");
}

}  // namespace

LegendreCoeffs legendre_coeffs(int N_max) {
  if (N_max < 0) throw InvalidArgument("legendre_coeffs: negative degree");
  if (N_max > kMaxLegendreDegree)
    throw LimitError("legendre_coeffs: degree " + std::to_string(N_max) + " exceeds the limit of " +
                     std::to_string(kMaxLegendreDegree) + " (coefficient magnitudes grow like 4^n)");
  LegendreCoeffs c;
  c.N_max = N_max;
  c.l.resize(static_cast<std::size_t>(N_max) + 1);
  c.l[0] = {xreal(1)};
  if (N_max >= 1) c.l[1] = {xreal(0), xreal(1)};
  for (int n = 1; n < N_max; ++n) {
    const auto& pn = c.l[static_cast<std::size_t>(n)];
    const auto& pm = c.l[static_cast<std::size_t>(n - 1)];
    auto& next = c.l[static_cast<std::size_t>(n + 1)];
    next.assign(static_cast<std::size_t>(n) + 2, xreal(0));
    for (int k = 0; k <= n + 1; ++k) {
      xreal v = 0;
      if (k >= 1) v += xreal(2 * n + 1) * pn[static_cast<std::size_t>(k - 1)];
      if (k <= n - 1) v -= xreal(n) * pm[static_cast<std::size_t>(k)];
      next[static_cast<std::size_t>(k)] = v / xreal(n + 1);
    }
  }
  return c;
}

PotentialData potential_data(const SampledFunction& q) {
  PotentialData pd;
  pd.grid = q.grid;
  pd.q = q;
  pd.Q = indefinite_integral(q);
  SampledFunction q2(q.grid);
  for (int j = 0; j < q.size(); ++j) q2[j] = q[j] * q[j];
  pd.Q2 = indefinite_integral(q2);
  pd.dq = derivative6(q);
  pd.q0 = q[0];
  pd.qplus = SampledFunction(q.grid);
  pd.qminus = SampledFunction(q.grid);
  for (int j = 0; j < q.size(); ++j) {
    const xcomplex base = q[j] / xreal(4) - pd.Q[j] * pd.Q[j] / xreal(8);
    pd.qplus[j] = base + pd.q0 / xreal(4);
    pd.qminus[j] = base - pd.q0 / xreal(4);
  }
  return pd;
}

std::size_t CoefficientTable::flagged_count() const {
  std::size_t n = 0;
  for (const auto& row : cancellation)
    for (auto f : row) n += f;
  return n;
}

BetaTable beta_coeffs(const FormalPowersTable& phi, const LegendreCoeffs& l, int N, double x_min) {
  if (N < 0) throw InvalidArgument("beta_coeffs: negative truncation");
  if (phi.K_max < N) throw MissingPrerequisite("beta_coeffs: formal powers up to N are required");
  if (l.N_max < N) throw MissingPrerequisite("beta_coeffs: Legendre coefficients up to N are required");
  const Grid& g = phi.grid;
  const auto n_nodes = static_cast<std::size_t>(g.size());
  BetaTable t;
  t.grid = g;
  t.rows.assign(static_cast<std::size_t>(N) + 1, std::vector<xcomplex>(n_nodes));
  t.cancellation.assign(static_cast<std::size_t>(N) + 1, std::vector<std::uint8_t>(n_nodes, 0));

  std::vector<xreal> inv_xpow(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < x_min) continue;
    const xreal inv_x = xreal(1) / g.xnode(j);
    inv_xpow[0] = 1;
    for (int k = 1; k <= N; ++k) inv_xpow[static_cast<std::size_t>(k)] = inv_xpow[static_cast<std::size_t>(k - 1)] * inv_x;
    for (int n = 0; n <= N; ++n) {
      CompensatedSum s;
      // l_{k,n} vanishes unless n-k is even.
      for (int k = n % 2; k <= n; k += 2)
        s.add(l.x(n, k) * (phi.x(k, j) - phi.monomial[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]) *
              inv_xpow[static_cast<std::size_t>(k)]);
      t.rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = xreal(2 * n + 1) / xreal(2) * s.value();
      t.cancellation[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = s.cancelled() ? 1 : 0;
    }
  }
  return t;
}

BetaTable monomial_noise(const FormalPowersTable& phi, const LegendreCoeffs& l, int N, double x_min) {
  if (phi.K_max < N || l.N_max < N) throw MissingPrerequisite("monomial_noise: tables up to N are required");
  const Grid& g = phi.grid;
  BetaTable t;
  t.grid = g;
  t.rows.assign(static_cast<std::size_t>(N) + 1, std::vector<xcomplex>(static_cast<std::size_t>(g.size())));
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < x_min) continue;
    const xreal inv_x = xreal(1) / g.xnode(j);
    for (int n = 0; n <= N; ++n) {
      CompensatedSum s;
      xreal inv_pow = 1;
      for (int k = 0; k <= n; ++k) {
        if ((n - k) % 2 == 0) s.add(l.x(n, k) * phi.monomial[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * inv_pow);
        inv_pow *= inv_x;
      }
      s.add(xcomplex(-1));
      t.rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = xreal(2 * n + 1) / xreal(2) * s.value();
    }
  }
  return t;
}

std::vector<int> resolved_rows(const BetaTable& beta, const BetaTable& noise) {
  check_grid(beta.grid, noise.grid, "resolved_rows");
  const int rows = std::min(beta.row_count(), noise.row_count());
  std::vector<int> cut(static_cast<std::size_t>(beta.grid.size()), rows);
  auto unresolved = [&](int n, int j) {
    const xreal nu = xabs(noise.x(n, j));
    return nu > xreal(kNoiseFloorMinimum) && xabs(beta.x(n, j)) <= nu;
  };
  for (int j = 0; j < beta.grid.size(); ++j) {
    for (int n = 0; n < rows; ++n) {
      if (unresolved(n, j) && (n + 1 == rows || unresolved(n + 1, j))) {
        cut[static_cast<std::size_t>(j)] = n;
        break;
      }
    }
  }
  return cut;
}

std::vector<xcomplex> moment_row(const PotentialData& pd, const FormalPowersTable& phi, int n) {
  check_grid(pd.grid, phi.grid, "moments");
  if (n < 0) throw InvalidArgument("moments: negative index");
  if (n >= 2 && phi.K_max < n - 2) throw MissingPrerequisite("moments: formal powers up to n-2 are required");
  const Grid& g = pd.grid;
  std::vector<xcomplex> row(static_cast<std::size_t>(g.size()));
  // k_n = n(n-1)(phi_{n-2} - x^{n-2}) + (q/4 - Q^2/8 - (-1)^n q(0)/4) x^n - n Q x^{n-1}/2;
  // n = 0 and n = 1 are the same expression with the first term absent.
  const SampledFunction& qpm = (n % 2 == 0) ? pd.qminus : pd.qplus;
  for (int j = 0; j < g.size(); ++j) {
    const xreal x = g.xnode(j);
    xreal xpow_nm2 = 1;
    for (int p = 0; p < n - 2; ++p) xpow_nm2 *= x;
    xcomplex v(0);
    if (n >= 2) {
      const xreal xn = xpow_nm2 * x * x;
      v = xreal(n * (n - 1)) * (phi.x(n - 2, j) - phi.monomial[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(j)]) +
          qpm[j] * xn -
          xreal(n) * pd.Q[j] * xpow_nm2 * x / xreal(2);
    } else if (n == 1) {
      v = qpm[j] * x - pd.Q[j] / xreal(2);
    } else {
      v = qpm[j];
    }
    row[static_cast<std::size_t>(j)] = v;
  }
  return row;
}

MomentTable moments(const PotentialData& pd, const FormalPowersTable& phi, int n_max) {
  MomentTable t;
  t.grid = pd.grid;
  t.rows.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) t.rows.push_back(moment_row(pd, phi, n));
  return t;
}

AlphaTable alpha_seed(const PotentialData& pd, const FormalPowersTable& phi) {
  check_grid(pd.grid, phi.grid, "alpha_seed");
  if (phi.K_max < 1) throw MissingPrerequisite("alpha_seed: phi_0 and phi_1 are required");
  const Grid& g = pd.grid;
  const auto n_nodes = static_cast<std::size_t>(g.size());
  AlphaTable t;
  t.grid = g;
  t.rows.assign(4, std::vector<xcomplex>(n_nodes));
  const double x_min = pd.x_min();
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < x_min) continue;
    const xreal x = g.xnode(j);
    const xcomplex qp = pd.qplus[j], qm = pd.qminus[j], Q = pd.Q[j];
    const auto J = static_cast<std::size_t>(j);
    t.rows[0][J] = qm / xreal(2);
    t.rows[1][J] = xreal(3) / xreal(2) * (qp - Q / (xreal(2) * x));
    const xcomplex d0 = phi.x(0, j) - phi.monomial[0][J];
    const xcomplex d1 = phi.x(1, j) - phi.monomial[1][J];
    t.rows[2][J] = xreal(5) / xreal(2) * (qm + xreal(3) * d0 / (x * x) -
                                          xreal(3) * Q / (xreal(2) * x));
    // The Q term is -3Q/x: this is what the Legendre sum over k_1 and k_3
    // produces, and it makes alpha_3 vanish as x -> 0.
    t.rows[3][J] = xreal(7) / xreal(2) * (qp + xreal(15) * d1 / (x * x * x) - xreal(3) * Q / x);
  }
  return t;
}

std::vector<xcomplex> alpha_direct(const MomentTable& k, const LegendreCoeffs& l, int n, double x_min,
                                   std::vector<std::uint8_t>* flags) {
  if (n < 0) throw InvalidArgument("alpha_direct: negative index");
  if (k.row_count() <= n) throw MissingPrerequisite("alpha_direct: moments up to n are required");
  if (l.N_max < n) throw MissingPrerequisite("alpha_direct: Legendre coefficients up to n are required");
  const Grid& g = k.grid;
  std::vector<xcomplex> row(static_cast<std::size_t>(g.size()));
  if (flags) flags->assign(row.size(), 0);
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < x_min) continue;
    const xreal inv_x = xreal(1) / g.xnode(j);
    CompensatedSum s;
    xreal inv_pow = 1;
    for (int m = 0; m <= n; ++m) {
      if ((n - m) % 2 == 0) s.add(l.x(n, m) * k.x(m, j) * inv_pow);
      inv_pow *= inv_x;
    }
    row[static_cast<std::size_t>(j)] = xreal(2 * n + 1) / xreal(2) * s.value();
    if (flags) (*flags)[static_cast<std::size_t>(j)] = s.cancelled() ? 1 : 0;
  }
  return row;
}

void alpha_recurrence(const BetaTable& beta, AlphaTable& alpha, int n, double x_min) {
  if (n < 4) throw InvalidArgument("alpha_recurrence: n must be at least 4");
  if (alpha.row_count() != n)
    throw MissingPrerequisite("alpha_recurrence: alpha rows 0..n-1 must be present (have " +
                              std::to_string(alpha.row_count()) + ", n = " + std::to_string(n) + ")");
  if (beta.row_count() <= n - 2)
    throw MissingPrerequisite("alpha_recurrence: beta row n-2 must be present");
  check_grid(beta.grid, alpha.grid, "alpha_recurrence");
  const Grid& g = alpha.grid;
  const xreal a = xreal((2 * n - 1) * (2 * n + 1));
  const xreal c2 = xreal(2) / xreal((2 * n - 5) * (2 * n - 1));
  const xreal c4 = xreal(1) / xreal((2 * n - 7) * (2 * n - 5));
  std::vector<xcomplex> row(static_cast<std::size_t>(g.size()));
  const auto& am2 = alpha.rows[static_cast<std::size_t>(n - 2)];
  const auto& am4 = alpha.rows[static_cast<std::size_t>(n - 4)];
  const auto& bm2 = beta.rows[static_cast<std::size_t>(n - 2)];
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < x_min) continue;
    const auto J = static_cast<std::size_t>(j);
    const xreal x = g.xnode(j);
    row[J] = a * (bm2[J] / (x * x) + c2 * am2[J] - c4 * am4[J]);
  }
  alpha.rows.push_back(std::move(row));
}

AlphaTable alpha_table(const PotentialData& pd, const FormalPowersTable& phi, const BetaTable& beta,
                       int n_max) {
  AlphaTable t = alpha_seed(pd, phi);
  if (n_max < 3) t.rows.resize(static_cast<std::size_t>(std::max(n_max, 0)) + 1);
  for (int n = 4; n <= n_max; ++n) alpha_recurrence(beta, t, n, pd.x_min());
  return t;
}

AccuracyIndicators accuracy_indicators(const PotentialData& pd, const AlphaTable& alpha, int N) {
  if (alpha.row_count() <= N) throw MissingPrerequisite("accuracy_indicators: alpha rows up to N are required");
  const Grid& g = pd.grid;
  AccuracyIndicators r;
  r.eps1.assign(static_cast<std::size_t>(g.size()), std::numeric_limits<double>::quiet_NaN());
  r.eps2 = r.eps1;
  const xcomplex dq0 = pd.dq[0];
  for (int j = 0; j < g.size(); ++j) {
    if (g.node(j) < pd.x_min()) continue;
    const xreal x = g.xnode(j);
    const xcomplex Q = pd.Q[j];
    const xcomplex k_diag = (pd.dq[j] - pd.q[j] * Q - pd.Q2[j] + Q * Q * Q / xreal(6)) / xreal(8);
    const xcomplex k_anti = (dq0 + pd.q0 * Q) / xreal(8);
    CompensatedSum plus, alternating;
    for (int n = 0; n <= N; ++n) {
      const xcomplex a = alpha.x(n, j);
      plus.add(a);
      alternating.add(n % 2 == 0 ? a : -a);
    }
    r.eps1[static_cast<std::size_t>(j)] = to_double(xabs(k_diag - plus.value() / x));
    r.eps2[static_cast<std::size_t>(j)] = to_double(xabs(k_anti - alternating.value() / x));
  }
  return r;
}

}  // namespace nsbf
