#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsbf/grid.hpp"
#include "nsbf/solution.hpp"

namespace nsbf::cli {

enum class Format { Csv, Json };

/// Everything a subcommand needs. Built from an optional JSON config file
/// (`"schema": 1`) overlaid by command-line flags.
struct RunConfig {
  std::string potential;       ///< expression in x
  std::string potential_file;  ///< tabulated samples; exclusive with `potential`
  double b = 0.0;              ///< 0 means pi
  int M = 1998;
  int N = 25;
  double omega_switch = 1.0;
  Format format = Format::Csv;
  int threads = 0;  ///< 0 means the hardware concurrency
  bool timestamp = true;

  Representation representation = Representation::Auto;
  std::vector<std::string> omega;  ///< constant expressions
  std::vector<std::string> x;      ///< constant expressions, must hit grid nodes
  std::optional<int> count;
  double omega_lo = 0.0, omega_hi = 0.0, h_scan = 0.0;

  std::vector<int> bench_N{5, 15, 25};
  std::string reference_file;

  double interval() const;
  int worker_count() const;
};

/// Reads a JSON config. Unknown keys and a schema other than 1 are errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Samples of a tabulated potential: header `# tabulated-potential v1`,
/// then rows `x q [im q]` separated by whitespace or commas, uniform in x
/// starting at 0.
struct TabulatedPotential {
  std::vector<double> x;
  std::vector<cplx> q;
  /// Degree-6 Lagrange interpolation on the 7 nearest samples.
  cplx operator()(double t) const;
};
TabulatedPotential read_tabulated(std::istream& in);
TabulatedPotential read_tabulated(const std::string& path);

/// The potential sampled on grid(b, M). `resampled` is set when a table had
/// to be interpolated onto the grid.
struct PotentialInput {
  SampledFunction samples;
  std::string description;
  bool resampled = false;
  bool from_table = false;
  std::function<cplx(double)> evaluate;  ///< pointwise q for the oracle
};
PotentialInput load_potential(const RunConfig& cfg);

/// Evaluates a constant expression such as "pi/2" or "1e3".
double constant_value(const std::string& text);

/// Grid index of x; InvalidArgument unless x is within 1e-9 spacings of a
/// node.
int node_index(const Grid& g, double x);

/// Subcommands. Output goes to `out`; warnings to `err`.
void cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_eigs(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Exit codes: 0 ok, 2 configuration or parse error, 3 evaluation error,
/// 4 spectral error, 5 oracle error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsbf::cli
