#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nsbf/precision.hpp"

namespace nsbf {

/// Uniform grid x_j = j*b/M on [0,b]. M is a multiple of 6 so the composite
/// degree-6 Newton-Cotes blocks tile the interval.
struct Grid {
  double b = 0.0;
  int M = 0;

  int size() const noexcept { return M + 1; }
  double step() const noexcept { return b / M; }
  /// Node in double; node(M) == b exactly.
  double node(int j) const noexcept { return j == M ? b : static_cast<double>(j) * b / M; }
  /// Node in the extended working type.
  xreal xnode(int j) const noexcept { return j == M ? xreal(b) : xreal(j) * xreal(b) / xreal(M); }

  bool operator==(const Grid&) const = default;
};

Grid make_grid(double b, int M);

/// Complex samples of a function on a grid, held in the extended type.
struct SampledFunction {
  Grid grid;
  std::vector<xcomplex> values;

  SampledFunction() = default;
  SampledFunction(Grid g, std::vector<xcomplex> v);
  explicit SampledFunction(Grid g) : grid(g), values(static_cast<std::size_t>(g.size())) {}

  int size() const noexcept { return static_cast<int>(values.size()); }
  cplx operator()(int j) const { return to_cplx(values[static_cast<std::size_t>(j)]); }
  xcomplex& operator[](int j) { return values[static_cast<std::size_t>(j)]; }
  const xcomplex& operator[](int j) const { return values[static_cast<std::size_t>(j)]; }

  /// max_j |f(x_j)|
  double sup_norm() const;
  /// min_j |f(x_j)| and the node where it is attained.
  std::pair<double, int> min_abs() const;
};

SampledFunction sample(const Grid& g, const std::function<cplx(double)>& f);
SampledFunction sample_real(const Grid& g, const std::function<double(double)>& f);

/// Integration weights of the local degree-6 interpolant on nodes 0..6,
/// integrated from 0 to m (in units of h), m = 1..6. Row 0 is zero.
const std::array<std::array<xreal, 7>, 7>& newton_cotes6_partial_weights();

/// F(x_j) = int_0^{x_j} f, F(0) = 0 exactly; composite 7-point Newton-Cotes
/// on consecutive 6-interval blocks, interior block nodes from the integrated
/// local interpolant.
SampledFunction indefinite_integral(const SampledFunction& f);

/// Same operator on a raw span (used internally on table rows).
void indefinite_integral(const Grid& g, std::span<const xcomplex> f, std::span<xcomplex> out);

/// Solutions of f'' = q f with f0(0)=1, f0'(0)=0 and f1(0)=0, f1'(0)=1,
/// summed as Picard series g_{m+1} = int int q g_m.
struct HomogeneousSolutions {
  SampledFunction f0;
  SampledFunction f1;
  int iterations = 0;
};

/// Stops when sup|g_m| < rel_tol * (1 + sup|partial sum|) for both series.
/// The default tolerance is tied to the extended working precision; pass
/// 1e-15 to reproduce a double-precision stopping rule.
HomogeneousSolutions solve_homogeneous(const SampledFunction& q, double rel_tol = 0.0,
                                       int max_iterations = 200);

/// Derivative by 7-point finite differences (6th order): centred in the
/// interior, shifted one-sided stencils within 3 nodes of either end.
SampledFunction derivative6(const SampledFunction& f);

}  // namespace nsbf
