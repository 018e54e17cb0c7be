#include "nsbf/solution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbf/bessel.hpp"
#include "nsbf/error.hpp"

namespace nsbf {

namespace {

constexpr cplx kI(0.0, 1.0);
const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

void check_node(const SolutionModel& m, int j) {
  if (j < 0 || j > m.grid().M) throw InvalidArgument("node index out of range: " + std::to_string(j));
}

// 2 sum_{n=0}^{count-1} i^n c_n j_n(z). The 2 comes from
// int_{-1}^{1} P_n(s) e^{izs} ds = 2 i^n j_n(z): c_n are Legendre
// coefficients of x K(x, xs).
cplx nsbf_sum(const std::vector<cplx>& coeffs, int count, cplx z) {
  thread_local std::vector<cplx> bessel;
  spherical_j_into(count - 1, z, bessel);
  cplx s(0.0, 0.0);
  for (int n = 0; n < count; ++n) s += kIPow[n % 4] * coeffs[static_cast<std::size_t>(n)] * bessel[static_cast<std::size_t>(n)];
  return 2.0 * s;
}

}  // namespace

SolutionModel build_model(const SampledFunction& q, const ModelOptions& options) {
  if (options.N < 0 || options.N > kMaxTruncation)
    throw LimitError("truncation N must lie in [0, " + std::to_string(kMaxTruncation) + "]");
  if (options.extra_rows < 0) throw InvalidArgument("extra_rows must be non-negative");
  if (!(options.omega_switch >= 0.0)) throw InvalidArgument("omega_switch must be non-negative");
  const int n_beta = options.N + options.extra_rows;
  const int n_alpha = n_beta + 2;
  if (n_alpha > kMaxLegendreDegree) throw LimitError("N + extra_rows + 2 exceeds the Legendre degree limit");

  SolutionModel m;
  m.options_ = options;
  for (const auto& v : q.values)
    if (v.imag() != 0) m.real_potential_ = false;

  m.pd_ = potential_data(q);
  const HomogeneousSolutions hs = solve_homogeneous(q);
  m.phi_ = formal_powers_auto(hs.f0, hs.f1, n_beta + 4);
  const LegendreCoeffs l = legendre_coeffs(n_alpha);
  m.beta_ = beta_coeffs(m.phi_, l, n_beta, m.pd_.x_min());
  m.alpha_ = alpha_table(m.pd_, m.phi_, m.beta_, n_alpha);
  m.alpha_tail_d_.assign(static_cast<std::size_t>(q.grid.size()), {});
  for (int j = 0; j < q.grid.size(); ++j)
    for (int n = options.N + 3; n <= n_alpha; ++n) m.alpha_tail_d_[static_cast<std::size_t>(j)].push_back(m.alpha_(n, j));
  m.resolved_ = resolved_rows(m.beta_, monomial_noise(m.phi_, l, n_beta, m.pd_.x_min()));
  // Rows past the resolved count are quadrature noise; beta_n feeds
  // alpha_{n+2}, so alpha keeps two more rows.
  for (int j = 0; j < q.grid.size(); ++j) {
    const int cut = m.resolved_[static_cast<std::size_t>(j)];
    for (int n = cut; n <= n_beta; ++n) m.beta_.rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = 0;
    for (int n = cut + 2; n <= n_alpha; ++n) m.alpha_.rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = 0;
  }

  const Grid& g = q.grid;
  m.beta_d_.assign(static_cast<std::size_t>(g.size()), std::vector<cplx>(static_cast<std::size_t>(n_beta) + 1));
  m.alpha_d_.assign(static_cast<std::size_t>(g.size()), std::vector<cplx>(static_cast<std::size_t>(n_alpha) + 1));
  m.q_d_.resize(static_cast<std::size_t>(g.size()));
  m.Q_d_.resize(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) {
    const auto J = static_cast<std::size_t>(j);
    for (int n = 0; n <= n_beta; ++n) m.beta_d_[J][static_cast<std::size_t>(n)] = m.beta_(n, j);
    for (int n = 0; n <= n_alpha; ++n) m.alpha_d_[J][static_cast<std::size_t>(n)] = m.alpha_(n, j);
    m.q_d_[J] = m.pd_.q(j);
    m.Q_d_[J] = m.pd_.Q(j);
  }
  m.epsN_ = epsN_surrogate(m, options.extra_rows);
  return m;
}

SolutionModel build_model(const Expression& q, double b, int M, const ModelOptions& options) {
  const Grid g = make_grid(b, M);
  return build_model(sample_real(g, [&](double x) { return q.evaluate(x); }), options);
}

cplx eval_uN_tilde(const SolutionModel& m, cplx omega, int j) {
  check_node(m, j);
  const double x = m.grid().node(j);
  const cplx z = omega * x;
  return std::exp(kI * z) + nsbf_sum(m.beta_at(j), m.N() + 1, z);
}

cplx eval_uN(const SolutionModel& m, cplx omega, int j) {
  check_node(m, j);
  if (omega == cplx(0.0, 0.0)) throw ZeroOmegaError();
  const double x = m.grid().node(j);
  const cplx z = omega * x;
  const cplx w2 = omega * omega;
  const cplx Q = m.Q(j);
  const cplx k_diag = m.q(j) / 4.0 - Q * Q / 8.0;
  const cplx head = std::exp(kI * z) * (1.0 + Q / (2.0 * kI * omega) + k_diag / w2);
  const cplx reflected = m.q0() / 4.0 * std::exp(-kI * z) / w2;
  return head - reflected - nsbf_sum(m.alpha_at(j), m.N() + 3, z) / w2;
}

cplx eval_auto(const SolutionModel& m, cplx omega, int j) {
  const double a = std::abs(omega);
  if (a >= m.omega_switch() && a > 0.0) return eval_uN(m, omega, j);
  if (a > 0.0) return eval_uN_tilde(m, omega, j);
  check_node(m, j);
  return spps_eval(m.formal_powers(), omega, j, m.formal_powers().K_max);
}

cplx evaluate(const SolutionModel& m, Representation rep, cplx omega, int j) {
  switch (rep) {
    case Representation::Plain: return eval_uN_tilde(m, omega, j);
    case Representation::Improved: return eval_uN(m, omega, j);
    case Representation::Auto: break;
  }
  return eval_auto(m, omega, j);
}

std::vector<double> epsN_surrogate(const SolutionModel& m, int extra_rows) {
  if (extra_rows < 0 || extra_rows > m.extra_rows())
    throw MissingPrerequisite("epsN_surrogate: the model keeps only " + std::to_string(m.extra_rows()) +
                              " extra alpha rows");
  const Grid& g = m.grid();
  std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
  const int first = m.N() + 3;
  for (int j = 1; j < g.size(); ++j) {
    // Untruncated rows: where the grid cannot resolve the tail, its noise
    // level is the honest estimate.
    const auto& a = m.alpha_tail_at(j);
    double s = 0.0;
    for (int n = first; n < first + extra_rows; ++n) s += std::norm(a[static_cast<std::size_t>(n - first)]) / (2.0 * n + 1.0);
    eps[static_cast<std::size_t>(j)] = std::sqrt(2.0 / g.node(j) * s);
  }
  return eps;
}

double error_envelope(const SolutionModel& m, cplx omega, int j) {
  check_node(m, j);
  if (omega == cplx(0.0, 0.0)) throw ZeroOmegaError();
  const double x = m.grid().node(j);
  const double im = omega.imag();
  const double weight = std::fabs(im) < 1e-8 ? std::sqrt(2.0 * x) : std::sqrt(std::sinh(2.0 * im * x) / im);
  return m.epsN()[static_cast<std::size_t>(j)] * weight / std::norm(omega);
}

cplx sine_solution(const SolutionModel& m, cplx omega, int j, Representation rep) {
  if (omega == cplx(0.0, 0.0)) throw ZeroOmegaError();
  const cplx up = evaluate(m, rep, omega, j);
  if (m.real_potential() && omega.imag() == 0.0) return cplx(up.imag() / omega.real(), 0.0);
  const cplx down = evaluate(m, rep, -omega, j);
  return (up - down) / (2.0 * kI * omega);
}

}  // namespace nsbf
