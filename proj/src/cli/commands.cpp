#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsbf/cli.hpp"
#include "nsbf/coeffs.hpp"
#include "nsbf/error.hpp"
#include "nsbf/reference.hpp"
#include "nsbf/spectral.hpp"

namespace nsbf::cli {

namespace {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Output tables

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::string command;
  std::vector<std::pair<std::string, ojson>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> summary;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson cell_json(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (std::isfinite(v)) return v;
  }
  return nullptr;
}

void write_table(const Table& t, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == Format::Json) {
    ojson j;
    j["command"] = t.command;
    if (cfg.timestamp) j["generated"] = utc_timestamp();
    ojson meta = ojson::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    ojson rows = ojson::array();
    for (const auto& r : t.rows) {
      ojson row = ojson::array();
      for (const auto& c : r) row.push_back(cell_json(c));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    if (!t.summary.empty()) j["summary"] = t.summary;
    out << j.dump(1) << '\n';
    return;
  }
  out << "# nsbf " << t.command << '\n';
  if (cfg.timestamp) out << "# generated: " << utc_timestamp() << '\n';
  for (const auto& [k, v] : t.meta) {
    out << "# " << k << ": ";
    if (v.is_string()) out << v.get<std::string>();
    else if (v.is_number_float()) out << format_double(v.get<double>());
    else out << v.dump();
    out << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ',';
      const Cell& c = r[i];
      if (std::holds_alternative<long long>(c)) out << std::get<long long>(c);
      else if (std::holds_alternative<double>(c)) out << format_double(std::get<double>(c));
      else if (std::holds_alternative<std::string>(c)) out << std::get<std::string>(c);
    }
    out << '\n';
  }
  for (const auto& s : t.summary) out << "# summary: " << s << '\n';
}

// ---------------------------------------------------------------------------
// Shared pieces

struct Built {
  PotentialInput input;
  SolutionModel model;
};

Built build(const RunConfig& cfg, int N) {
  Built b{load_potential(cfg), {}};
  ModelOptions opt;
  opt.N = N;
  opt.omega_switch = cfg.omega_switch;
  b.model = build_model(b.input.samples, opt);
  return b;
}

void common_meta(Table& t, const RunConfig& cfg, const Built& b) {
  t.meta.emplace_back("potential", b.input.description);
  t.meta.emplace_back("potential_source", b.input.from_table ? "table" : "expression");
  t.meta.emplace_back("resampled", b.input.resampled);
  t.meta.emplace_back("b", cfg.interval());
  t.meta.emplace_back("M", cfg.M);
  t.meta.emplace_back("N", b.model.N());
  t.meta.emplace_back("omega_switch", cfg.omega_switch);
  t.meta.emplace_back("formal_powers_route", b.model.formal_powers().nonvanishing_route ? "nonvanishing" : "direct");
}

std::vector<int> selected_nodes(const RunConfig& cfg, const Grid& g, bool default_all) {
  std::vector<int> nodes;
  if (cfg.x.empty()) {
    if (default_all) {
      for (int j = 0; j <= g.M; ++j) nodes.push_back(j);
    } else {
      nodes.push_back(g.M);
    }
    return nodes;
  }
  for (const auto& s : cfg.x) nodes.push_back(node_index(g, constant_value(s)));
  return nodes;
}

std::string representation_name(Representation r) {
  switch (r) {
    case Representation::Plain: return "plain";
    case Representation::Improved: return "improved";
    case Representation::Auto: break;
  }
  return "auto";
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> read_reference(const std::string& path, int count) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open reference file '" + path + "'");
  std::map<int, double> by_index;
  std::string line;
  int implicit = 0;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    try {
      if (fields.size() == 1) {
        by_index[++implicit] = std::stod(fields[0]);
      } else if (fields.size() >= 2) {
        by_index[std::stoi(fields[0])] = std::stod(fields[1]);
      }
    } catch (const std::exception&) {
      if (by_index.empty() && implicit == 0) continue;  // column header
      throw InvalidArgument("reference file: cannot parse '" + line + "'");
    }
  }
  std::vector<double> out;
  for (int n = 1; n <= count; ++n) {
    const auto it = by_index.find(n);
    if (it == by_index.end()) throw InvalidArgument("reference file lacks eigenvalue " + std::to_string(n));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

void cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Built b = build(cfg, cfg.N);
  const SolutionModel& m = b.model;
  const Grid& g = m.grid();
  const int N = m.N();
  Table t;
  t.command = "coeffs";
  common_meta(t, cfg, b);

  std::size_t flagged = 0;
  for (int n = 0; n <= N; ++n)
    for (auto f : m.beta().cancellation[static_cast<std::size_t>(n)]) flagged += f;
  int truncated = 0;
  for (int j = 0; j <= g.M; ++j) truncated += m.resolved(j) <= N ? 1 : 0;
  const AccuracyIndicators ind = accuracy_indicators(m.potential(), m.alpha(), N + 2);
  t.meta.emplace_back("beta_rows", N + 1);
  t.meta.emplace_back("alpha_rows", N + 3);
  t.meta.emplace_back("beta_cancellation_flags", flagged);
  t.meta.emplace_back("nodes_with_truncated_rows", truncated);
  t.meta.emplace_back("eps1_at_b", ind.eps1.back());
  t.meta.emplace_back("eps2_at_b", ind.eps2.back());
  t.meta.emplace_back("epsN_surrogate_at_b", m.epsN().back());

  t.columns = {"x", "n", "beta_re", "beta_im", "alpha_re", "alpha_im"};
  for (int j : selected_nodes(cfg, g, true)) {
    for (int n = 0; n <= N + 2; ++n) {
      std::vector<Cell> row{g.node(j), static_cast<long long>(n)};
      if (n <= N) {
        const cplx v = m.beta()(n, j);
        row.emplace_back(v.real());
        row.emplace_back(v.imag());
      } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      }
      const cplx a = m.alpha()(n, j);
      row.emplace_back(a.real());
      row.emplace_back(a.imag());
      t.rows.push_back(std::move(row));
    }
  }
  write_table(t, cfg, out);
}

void cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.omega.empty()) throw InvalidArgument("solve needs at least one --omega value");
  const Built b = build(cfg, cfg.N);
  const SolutionModel& m = b.model;
  Table t;
  t.command = "solve";
  common_meta(t, cfg, b);
  t.meta.emplace_back("representation", representation_name(cfg.representation));
  t.columns = {"omega", "x", "re_u", "im_u", "envelope"};
  const auto nodes = selected_nodes(cfg, m.grid(), false);
  for (const auto& ws : cfg.omega) {
    const double w = constant_value(ws);
    for (int j : nodes) {
      const cplx u = evaluate(m, cfg.representation, w, j);
      const double env = w != 0.0 ? error_envelope(m, w, j) : std::numeric_limits<double>::quiet_NaN();
      t.rows.push_back({w, m.grid().node(j), u.real(), u.imag(), env});
    }
  }
  write_table(t, cfg, out);
}

void cmd_eigs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int count = cfg.count.value_or(10);
  const Built b = build(cfg, cfg.N);
  const SolutionModel& m = b.model;
  EigOptions opt;
  opt.omega_lo = cfg.omega_lo;
  opt.omega_hi = cfg.omega_hi;
  opt.h_scan = cfg.h_scan;
  opt.rep = cfg.representation;
  opt.threads = cfg.worker_count();
  const EigReport r = find_eigenvalues(m, count, opt);
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';

  Table t;
  t.command = "eigs";
  common_meta(t, cfg, b);
  t.meta.emplace_back("representation", representation_name(cfg.representation));
  t.meta.emplace_back("boundary", "dirichlet");
  t.meta.emplace_back("index_offset", r.index_offset);
  t.meta.emplace_back("warnings", r.warnings.size());
  const bool asym = std::fabs(cfg.interval() - std::numbers::pi) <= 1e-12;
  t.columns = {"n", "lambda", "omega", "residual"};
  if (asym) t.columns.push_back("asymptotic");
  const double Qb = m.Q(m.grid().M).real();
  for (const auto& e : r.eigenvalues) {
    std::vector<Cell> row{static_cast<long long>(e.n), e.lambda, e.omega, e.residual};
    if (asym) row.emplace_back(asymptotic_eigenvalue(e.n, Qb, cfg.interval()));
    t.rows.push_back(std::move(row));
  }
  write_table(t, cfg, out);
}

void cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int count = cfg.count.value_or(460);
  if (cfg.bench_N.empty()) throw InvalidArgument("bench needs at least one N");
  const PotentialInput input = load_potential(cfg);

  std::vector<double> reference;
  std::string source;
  if (!cfg.reference_file.empty()) {
    reference = read_reference(cfg.reference_file, count);
    source = cfg.reference_file;
  } else {
    for (const auto& v : input.samples.values)
      if (v.imag() != 0) throw InvalidArgument("bench: complex potentials are not supported");
    auto q = input.evaluate;
    reference = reference_eigenvalues([q](double x) { return q(x).real(); }, cfg.interval(), count, cfg.worker_count());
    source = "built-in oracle (RKF78 Prufer shooting, tol 1e-12)";
  }

  Table t;
  t.command = "bench";
  t.meta.emplace_back("potential", input.description);
  t.meta.emplace_back("resampled", input.resampled);
  t.meta.emplace_back("b", cfg.interval());
  t.meta.emplace_back("M", cfg.M);
  t.meta.emplace_back("omega_switch", cfg.omega_switch);
  t.meta.emplace_back("count", count);
  t.meta.emplace_back("reference", source);
  t.columns = {"n", "lambda_ref"};
  for (int N : cfg.bench_N) {
    t.columns.push_back("err_plain_N" + std::to_string(N));
    t.columns.push_back("err_improved_N" + std::to_string(N));
  }
  t.rows.resize(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n)
    t.rows[static_cast<std::size_t>(n - 1)] = {static_cast<long long>(n), reference[static_cast<std::size_t>(n - 1)]};

  for (int N : cfg.bench_N) {
    ModelOptions mo;
    mo.N = N;
    mo.omega_switch = cfg.omega_switch;
    const SolutionModel m = build_model(input.samples, mo);
    std::vector<double> errs[2];
    const Representation reps[2] = {Representation::Plain, Representation::Auto};
    for (int k = 0; k < 2; ++k) {
      EigOptions opt;
      opt.rep = reps[k];
      opt.threads = cfg.worker_count();
      opt.h_scan = cfg.h_scan;
      const EigReport r = find_eigenvalues(m, count, opt);
      for (const auto& w : r.warnings) err << "warning (N=" << N << "): " << w << '\n';
      errs[k].assign(static_cast<std::size_t>(count), std::numeric_limits<double>::quiet_NaN());
      for (const auto& e : r.eigenvalues)
        if (e.n >= 1 && e.n <= count)
          errs[k][static_cast<std::size_t>(e.n - 1)] = std::fabs(e.lambda - reference[static_cast<std::size_t>(e.n - 1)]);
    }
    int improved_better = 0;
    for (int i = 0; i < count; ++i) {
      t.rows[static_cast<std::size_t>(i)].emplace_back(errs[0][static_cast<std::size_t>(i)]);
      t.rows[static_cast<std::size_t>(i)].emplace_back(errs[1][static_cast<std::size_t>(i)]);
      if (errs[1][static_cast<std::size_t>(i)] < errs[0][static_cast<std::size_t>(i)]) ++improved_better;
    }
    for (int k = 0; k < 2; ++k) {
      const auto& e = errs[k];
      const double mx = *std::max_element(e.begin(), e.end(), [](double a, double b) {
        return std::isnan(a) || (!std::isnan(b) && a < b);
      });
      t.summary.push_back("representation=" + std::string(k ? "improved" : "plain") + " N=" + std::to_string(N) +
                          " max=" + format_double(mx) + " median=" + format_double(median(e)));
    }
    t.summary.push_back("N=" + std::to_string(N) + " improved_better=" + std::to_string(improved_better) + "/" +
                        std::to_string(count));
  }
  write_table(t, cfg, out);
}

// ---------------------------------------------------------------------------
// Entry point

namespace {

struct Flags {
  std::string config, potential, potential_file, b, format, representation, reference_file;
  std::string omega_lo, omega_hi, h_scan, omega_switch;
  int M = 0, N = 0, count = 0, threads = 0;
  std::vector<std::string> omega, x;
  std::vector<int> bench_N;
  bool no_timestamp = false;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* app) {
    opts["config"] = app->add_option("--config", config, "JSON config file (schema 1)");
    opts["potential"] = app->add_option("--potential", potential, "potential q(x) as an expression");
    opts["potential-file"] = app->add_option("--potential-file", potential_file, "tabulated potential");
    opts["b"] = app->add_option("--b", b, "interval length (default pi)");
    opts["M"] = app->add_option("--M", M, "grid intervals, a multiple of 6 (default 1998)");
    opts["N"] = app->add_option("--N", N, "truncation order (default 25)");
    opts["omega-switch"] = app->add_option("--omega-switch", omega_switch, "|omega| above which u_N is used");
    opts["omega"] = app->add_option("--omega", omega, "spectral parameter values");
    opts["x"] = app->add_option("--x", x, "grid nodes to report");
    opts["count"] = app->add_option("--count", count, "number of eigenvalues");
    opts["format"] = app->add_option("--format", format, "csv or json");
    opts["threads"] = app->add_option("--threads", threads, "worker threads (default: all cores)");
    opts["representation"] = app->add_option("--representation", representation, "auto, plain or improved");
    opts["omega-lo"] = app->add_option("--omega-lo", omega_lo, "eigenvalue scan start");
    opts["omega-hi"] = app->add_option("--omega-hi", omega_hi, "eigenvalue scan end (hard limit)");
    opts["h-scan"] = app->add_option("--h-scan", h_scan, "eigenvalue scan step");
    opts["reference-file"] = app->add_option("--reference-file", reference_file, "bench reference eigenvalues");
    opts["bench-N"] = app->add_option("--bench-N", bench_N, "truncation orders for bench");
    opts["no-timestamp"] = app->add_flag("--no-timestamp", no_timestamp, "omit the timestamp line");
  }
  bool given(const std::string& name) const { return opts.at(name)->count() > 0; }

  RunConfig resolve() const {
    RunConfig c = given("config") ? load_config(config) : RunConfig{};
    if (given("potential")) {
      c.potential = potential;
      c.potential_file.clear();
    }
    if (given("potential-file")) {
      c.potential_file = potential_file;
      if (!given("potential")) c.potential.clear();
    }
    if (given("b")) c.b = constant_value(b);
    if (given("M")) c.M = M;
    if (given("N")) c.N = N;
    if (given("omega-switch")) c.omega_switch = constant_value(omega_switch);
    if (given("omega")) c.omega = omega;
    if (given("x")) c.x = x;
    if (given("count")) c.count = count;
    if (given("format")) {
      if (format == "csv") c.format = Format::Csv;
      else if (format == "json") c.format = Format::Json;
      else throw InvalidArgument("format must be csv or json");
    }
    if (given("threads")) c.threads = threads;
    if (given("representation")) {
      if (representation == "auto") c.representation = Representation::Auto;
      else if (representation == "plain") c.representation = Representation::Plain;
      else if (representation == "improved") c.representation = Representation::Improved;
      else throw InvalidArgument("representation must be auto, plain or improved");
    }
    if (given("omega-lo")) c.omega_lo = constant_value(omega_lo);
    if (given("omega-hi")) c.omega_hi = constant_value(omega_hi);
    if (given("h-scan")) c.h_scan = constant_value(h_scan);
    if (given("reference-file")) c.reference_file = reference_file;
    if (given("bench-N")) c.bench_N = bench_N;
    if (no_timestamp) c.timestamp = false;
    if (c.threads < 0) throw InvalidArgument("threads must be non-negative");
    if (c.count && *c.count < 1) throw InvalidArgument("count must be at least 1");
    return c;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solutions and Dirichlet eigenvalues of -u'' + q u = omega^2 u via Neumann series of Bessel functions",
               "nsbf"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const Sub subs[] = {
      {"coeffs", "dump beta_n and alpha_n tables", cmd_coeffs},
      {"solve", "evaluate u(omega, x)", cmd_solve},
      {"eigs", "Dirichlet eigenvalues on [0, b]", cmd_eigs},
      {"bench", "eigenvalue errors of both representations against a reference", cmd_bench},
  };
  Flags flags[4];
  CLI::App* apps[4];
  for (int i = 0; i < 4; ++i) {
    apps[i] = app.add_subcommand(subs[i].name, subs[i].help);
    flags[i].attach(apps[i]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    for (int i = 0; i < 4; ++i) {
      if (apps[i]->parsed()) {
        subs[i].fn(flags[i].resolve(), out, err);
        return 0;
      }
    }
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const SpectralError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const OracleError& e) {
    err << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nsbf::cli
