#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nsbf/cli.hpp"
#include "nsbf/error.hpp"
#include "nsbf/expr.hpp"

namespace nsbf::cli {

using nlohmann::json;

double RunConfig::interval() const { return b > 0.0 ? b : std::numbers::pi; }

int RunConfig::worker_count() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

double constant_value(const std::string& text) {
  const Expression e = parse(text);
  for (const auto& node : e.nodes())
    if (node.op == Expression::Op::Variable)
      throw InvalidArgument("'" + text + "' must be a constant (it refers to x)");
  return e.evaluate(0.0);
}

int node_index(const Grid& g, double x) {
  if (!std::isfinite(x) || x < 0.0 || x > g.b * (1.0 + 1e-12))
    throw InvalidArgument("x = " + std::to_string(x) + " lies outside [0, b]");
  const double pos = x / g.step();
  const long j = std::lround(pos);
  if (std::fabs(pos - static_cast<double>(j)) > 1e-9)
    throw InvalidArgument("x = " + std::to_string(x) + " is not a grid node (spacing b/M = " +
                          std::to_string(g.step()) + ")");
  return static_cast<int>(std::min<long>(j, g.M));
}

namespace {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw InvalidArgument("format must be csv or json, got '" + s + "'");
}

Representation parse_representation(const std::string& s) {
  if (s == "auto") return Representation::Auto;
  if (s == "plain") return Representation::Plain;
  if (s == "improved") return Representation::Improved;
  throw InvalidArgument("representation must be auto, plain or improved, got '" + s + "'");
}

double number_or_expression(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return constant_value(v.get<std::string>());
  throw InvalidArgument("config key '" + key + "' must be a number or a constant expression");
}

std::vector<std::string> value_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw InvalidArgument("config key '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number()) {
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof buf, e.get<double>());
      out.emplace_back(buf, r.ptr);
    } else {
      throw InvalidArgument("config key '" + key + "' must hold numbers or strings");
    }
  }
  return out;
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InvalidArgument("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string_value(const json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidArgument("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw InvalidArgument("config must declare \"schema\": 1");

  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "schema") continue;
    if (key == "potential") c.potential = string_value(v, key);
    else if (key == "potential_file") c.potential_file = string_value(v, key);
    else if (key == "b") c.b = number_or_expression(v, key);
    else if (key == "M") c.M = integer(v, key);
    else if (key == "N") c.N = integer(v, key);
    else if (key == "omega_switch") c.omega_switch = number_or_expression(v, key);
    else if (key == "format") c.format = parse_format(string_value(v, key));
    else if (key == "threads") c.threads = integer(v, key);
    else if (key == "timestamp") {
      if (!v.is_boolean()) throw InvalidArgument("config key 'timestamp' must be a boolean");
      c.timestamp = v.get<bool>();
    }
    else if (key == "representation") c.representation = parse_representation(string_value(v, key));
    else if (key == "omega") c.omega = value_list(v, key);
    else if (key == "x") c.x = value_list(v, key);
    else if (key == "count") c.count = integer(v, key);
    else if (key == "omega_lo") c.omega_lo = number_or_expression(v, key);
    else if (key == "omega_hi") c.omega_hi = number_or_expression(v, key);
    else if (key == "h_scan") c.h_scan = number_or_expression(v, key);
    else if (key == "bench_N") {
      if (!v.is_array()) throw InvalidArgument("config key 'bench_N' must be an array");
      c.bench_N.clear();
      for (const auto& e : v) c.bench_N.push_back(integer(e, key));
    }
    else if (key == "reference_file") c.reference_file = string_value(v, key);
    else throw InvalidArgument("unknown config key '" + key + "'");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Tabulated potentials

namespace {

std::vector<double> split_numbers(const std::string& line, int line_no) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ',')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != ',') ++j;
    double v = 0.0;
    const auto r = std::from_chars(line.data() + i, line.data() + j, v);
    if (r.ec != std::errc() || r.ptr != line.data() + j)
      throw InvalidArgument("tabulated potential, line " + std::to_string(line_no) + ": '" + line.substr(i, j - i) +
                            "' is not a number");
    out.push_back(v);
    i = j;
  }
  return out;
}

}  // namespace

TabulatedPotential read_tabulated(std::istream& in) {
  TabulatedPotential t;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (!header) {
      if (line.substr(first) != "# tabulated-potential v1")
        throw InvalidArgument("tabulated potential must start with '# tabulated-potential v1'");
      header = true;
      continue;
    }
    if (line[first] == '#') continue;
    const auto v = split_numbers(line, line_no);
    if (v.size() != 2 && v.size() != 3)
      throw InvalidArgument("tabulated potential, line " + std::to_string(line_no) + ": expected 2 or 3 columns");
    t.x.push_back(v[0]);
    t.q.emplace_back(v[1], v.size() == 3 ? v[2] : 0.0);
  }
  if (!header) throw InvalidArgument("tabulated potential is empty");
  if (t.x.size() < 7) throw InvalidArgument("tabulated potential needs at least 7 samples");
  if (t.x.front() != 0.0) throw InvalidArgument("tabulated potential must start at x = 0");
  const double h = (t.x.back() - t.x.front()) / static_cast<double>(t.x.size() - 1);
  if (!(h > 0.0)) throw InvalidArgument("tabulated potential: x must increase");
  for (std::size_t i = 0; i < t.x.size(); ++i)
    if (std::fabs(t.x[i] - static_cast<double>(i) * h) > 1e-9 * t.x.back())
      throw InvalidArgument("tabulated potential: x is not uniform (row " + std::to_string(i + 1) + ")");
  for (const auto& v : t.q)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("tabulated potential contains non-finite values");
  return t;
}

TabulatedPotential read_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open potential file '" + path + "'");
  return read_tabulated(in);
}

cplx TabulatedPotential::operator()(double t) const {
  const std::size_t n = x.size();
  const double h = x.back() / static_cast<double>(n - 1);
  const double pos = t / h;
  const long centre = std::lround(pos);
  const long start = std::clamp<long>(centre - 3, 0, static_cast<long>(n) - 7);
  cplx sum(0.0, 0.0);
  for (long i = start; i < start + 7; ++i) {
    double w = 1.0;
    for (long k = start; k < start + 7; ++k)
      if (k != i) w *= (pos - static_cast<double>(k)) / static_cast<double>(i - k);
    sum += w * q[static_cast<std::size_t>(i)];
  }
  return sum;
}

PotentialInput load_potential(const RunConfig& cfg) {
  const bool has_expr = !cfg.potential.empty(), has_file = !cfg.potential_file.empty();
  if (has_expr == has_file) throw InvalidArgument("give exactly one of --potential and --potential-file");
  const Grid g = make_grid(cfg.interval(), cfg.M);
  PotentialInput p;
  if (has_expr) {
    auto e = std::make_shared<Expression>(parse(cfg.potential));
    p.samples = sample_real(g, [&](double x) { return e->evaluate(x); });
    p.description = cfg.potential;
    p.evaluate = [e](double x) { return cplx(e->evaluate(x), 0.0); };
    return p;
  }
  auto t = std::make_shared<TabulatedPotential>(read_tabulated(cfg.potential_file));
  p.from_table = true;
  p.description = cfg.potential_file;
  const double span = t->x.back();
  if (span < g.b * (1.0 - 1e-12))
    throw InvalidArgument("tabulated potential covers [0, " + std::to_string(span) + "], shorter than b");
  const bool matches = t->x.size() == static_cast<std::size_t>(g.size()) && std::fabs(span - g.b) <= 1e-12 * g.b;
  if (matches) {
    SampledFunction s(g);
    for (int j = 0; j < g.size(); ++j) s[j] = to_x(t->q[static_cast<std::size_t>(j)]);
    p.samples = std::move(s);
  } else {
    p.samples = sample(g, [&](double x) { return (*t)(x); });
    p.resampled = true;
  }
  p.evaluate = [t](double x) { return (*t)(x); };
  return p;
}

}  // namespace nsbf::cli
