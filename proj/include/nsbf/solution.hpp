#pragma once

#include <vector>

#include "nsbf/coeffs.hpp"
#include "nsbf/expr.hpp"
#include "nsbf/formal_powers.hpp"
#include "nsbf/grid.hpp"

namespace nsbf {

/// Which truncated series to evaluate.
enum class Representation {
  Auto,      ///< u_N for |omega| >= omega_switch, u~_N below, SPPS at 0
  Plain,     ///< u~_N = e^{i w x} + 2 sum_{n<=N} i^n beta_n j_n(w x)
  Improved,  ///< u_N with the 1/omega^2 remainder, sum up to N+2
};

struct ModelOptions {
  int N = 25;
  double omega_switch = 1.0;
  /// Extra alpha rows beyond N+2 kept for the Parseval tail estimate.
  int extra_rows = 8;
};

/// Everything needed to evaluate u(omega, x_j) for any omega. Immutable once
/// built; all member functions are const and safe to call concurrently.
class SolutionModel {
 public:
  const Grid& grid() const noexcept { return pd_.grid; }
  int N() const noexcept { return options_.N; }
  double omega_switch() const noexcept { return options_.omega_switch; }
  int extra_rows() const noexcept { return options_.extra_rows; }
  bool real_potential() const noexcept { return real_potential_; }

  const PotentialData& potential() const noexcept { return pd_; }
  const FormalPowersTable& formal_powers() const noexcept { return phi_; }
  /// Coefficient tables after per-node truncation (what evaluation uses).
  const BetaTable& beta() const noexcept { return beta_; }
  const AlphaTable& alpha() const noexcept { return alpha_; }
  /// Parseval tail estimate using all extra rows (see epsN_surrogate).
  const std::vector<double>& epsN() const noexcept { return epsN_; }

  /// Number of leading beta rows resolved by the grid at node j (see
  /// resolved_rows); rows beyond it are zeroed in beta() and alpha().
  int resolved(int j) const { return resolved_[static_cast<std::size_t>(j)]; }

  /// Double-precision views used by the evaluators: [j][n].
  const std::vector<cplx>& beta_at(int j) const { return beta_d_[static_cast<std::size_t>(j)]; }
  const std::vector<cplx>& alpha_at(int j) const { return alpha_d_[static_cast<std::size_t>(j)]; }
  /// Alpha rows N+3 .. N+2+extra_rows at node j before truncation; only the
  /// tail estimate reads them.
  const std::vector<cplx>& alpha_tail_at(int j) const { return alpha_tail_d_[static_cast<std::size_t>(j)]; }
  cplx q(int j) const { return q_d_[static_cast<std::size_t>(j)]; }
  cplx Q(int j) const { return Q_d_[static_cast<std::size_t>(j)]; }
  cplx q0() const noexcept { return q_d_.front(); }

 private:
  friend SolutionModel build_model(const SampledFunction& q, const ModelOptions& options);

  ModelOptions options_;
  bool real_potential_ = true;
  PotentialData pd_;
  FormalPowersTable phi_;
  BetaTable beta_;
  AlphaTable alpha_;
  std::vector<std::vector<cplx>> beta_d_, alpha_d_, alpha_tail_d_;
  std::vector<cplx> q_d_, Q_d_;
  std::vector<double> epsN_;
  std::vector<int> resolved_;
};

/// Full pipeline: q -> Q, int q^2 -> f0, f1 -> formal powers (direct or
/// nonvanishing route) -> beta -> alpha seeds + recurrence.
SolutionModel build_model(const SampledFunction& q, const ModelOptions& options = {});
SolutionModel build_model(const Expression& q, double b, int M, const ModelOptions& options = {});

/// u~_N(omega, x_j).
cplx eval_uN_tilde(const SolutionModel& m, cplx omega, int j);

/// u_N(omega, x_j); throws ZeroOmegaError at omega = 0.
cplx eval_uN(const SolutionModel& m, cplx omega, int j);

/// Dispatch on |omega| against omega_switch.
cplx eval_auto(const SolutionModel& m, cplx omega, int j);

cplx evaluate(const SolutionModel& m, Representation rep, cplx omega, int j);

/// eps^_N(x) = sqrt((2/x) sum_{n=N+3}^{N+2+extra} |alpha_n|^2/(2n+1)), a
/// lower-biased estimate of the L2 truncation error of the kernel series.
std::vector<double> epsN_surrogate(const SolutionModel& m, int extra_rows);

/// eps^_N(x) sqrt(sinh(2 Im(w) x)/Im(w)) / |w|^2, with the Im(w) -> 0 limit
/// sqrt(2x) used when |Im w| < 1e-8.
double error_envelope(const SolutionModel& m, cplx omega, int j);

/// s(w, x) = (u(w, x) - u(-w, x)) / (2 i w): s(w,0) = 0, s'(w,0) = 1.
/// For real q and real w this is Im u(w, x) / w.
cplx sine_solution(const SolutionModel& m, cplx omega, int j, Representation rep = Representation::Auto);

}  // namespace nsbf
