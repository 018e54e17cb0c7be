// Acceptance checks. Run with criterion numbers as arguments (default: all);
// prints one PASS/FAIL line per criterion and exits non-zero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "nsbf/bessel.hpp"
#include "nsbf/coeffs.hpp"
#include "nsbf/formal_powers.hpp"
#include "nsbf/reference.hpp"
#include "nsbf/spectral.hpp"
#include "support.hpp"

using namespace nsbf;
using nsbf::test::pi;

namespace {

constexpr double kPaineLambda460 = 211607.047634847;
constexpr double kPaineAsymptotic460 = 211607.047660;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int hw_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

double paine_lambda460(double* elapsed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = build_model(parse("exp(x)"), pi, 1998, ModelOptions{25, 1.0, 8});
  EigOptions o;
  o.threads = 1;
  const auto r = find_eigenvalues(m, 460, o);
  if (elapsed) *elapsed = seconds_since(t0);
  return r.eigenvalues.back().lambda;
}

Outcome criterion1() {
  double t = 0;
  const double lam = paine_lambda460(&t);
  const double err = std::fabs(lam - kPaineLambda460);
  return {err <= 1e-6 && t < 30.0,
          fmt("Paine lambda_460 = %.9f, |error| = %.2e (tol 1e-6), %.2f s single-threaded (limit 30 s)", lam, err, t)};
}

Outcome criterion2() {
  const double asym = asymptotic_eigenvalue(460, std::exp(pi) - 1.0, pi);
  const double lam = paine_lambda460(nullptr);
  const double d_asym = std::fabs(asym - kPaineAsymptotic460);
  const double e_lam = std::fabs(lam - kPaineLambda460), e_asym = std::fabs(asym - kPaineLambda460);
  return {d_asym <= 5e-6 && e_lam < e_asym,
          fmt("asymptotic = %.6f (|diff| %.1e, tol 5e-6); computed error %.2e < asymptotic error %.2e", asym, d_asym,
              e_lam, e_asym)};
}

Outcome criterion3() {
  const auto& m = test::exp_model();
  const double ws[] = {10, 30, 100, 300, 1000};
  std::vector<double> r, lx, ly;
  std::string list;
  for (double w : ws) {
    const cplx u = reference_solution([](double x) { return cplx(std::exp(x)); }, w, pi);
    r.push_back(std::abs(u - eval_uN(m, w, 1998)));
    lx.push_back(std::log(w));
    ly.push_back(std::log(r.back()));
    list += fmt(" %.1e", r.back());
  }
  std::vector<double> scaled;
  for (std::size_t i = 0; i < r.size(); ++i) scaled.push_back(r[i] * ws[i] * ws[i]);
  const double spread = *std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {spread <= 50.0 && slope <= -1.8,
          "residuals" + list + fmt("; w^2 r spread %.1f (limit 50), log-log slope %.2f (limit -1.8)", spread, slope)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

Outcome criterion4() {
  const int count = 460;
  const auto q = [](double x) { return std::exp(x); };
  const auto ref = reference_eigenvalues(q, pi, count, hw_threads());
  auto errors = [&](int N, Representation rep) {
    const auto m = build_model(parse("exp(x)"), pi, 1998, ModelOptions{N, 1.0, 8});
    EigOptions o;
    o.rep = rep;
    o.threads = hw_threads();
    const auto r = find_eigenvalues(m, count, o);
    std::vector<double> e;
    for (int i = 0; i < count; ++i) e.push_back(std::fabs(r.eigenvalues[static_cast<std::size_t>(i)].lambda - ref[static_cast<std::size_t>(i)]));
    return e;
  };
  const auto p5 = errors(5, Representation::Plain), i5 = errors(5, Representation::Auto);
  int better = 0;
  for (int i = 0; i < count; ++i) better += i5[static_cast<std::size_t>(i)] < p5[static_cast<std::size_t>(i)];
  const auto p25 = errors(25, Representation::Plain), i25 = errors(25, Representation::Auto);
  const double mp = median(p25), mi = median(i25);
  const double ratio = std::max(mp, mi) / std::min(mp, mi);
  return {2 * better > count && ratio <= 10.0,
          fmt("N=5: improved closer on %.0f/%.0f indices (need a strict majority); ", better, count) +
              fmt("N=25 medians plain %.2e, improved %.2e, ratio %.1f (limit 10)", mp, mi, ratio)};
}

Outcome criterion5() {
  const Grid g = make_grid(pi, 1998);
  const auto q = sample_real(g, [](double) { return 0.0; });
  const auto pd = potential_data(q);
  const auto hs = solve_homogeneous(q);
  const auto phi = formal_powers_auto(hs.f0, hs.f1, 31);
  const auto l = legendre_coeffs(27);
  const auto beta = beta_coeffs(phi, l, 25, pd.x_min());
  const auto alpha = alpha_table(pd, phi, beta, 27);
  const auto k = moments(pd, phi, 27);
  double coef = 0;
  for (int j = 0; j <= g.M; ++j) {
    for (int n = 0; n <= 25; ++n) coef = std::max(coef, std::abs(beta(n, j)));
    for (int n = 0; n <= 27; ++n) coef = std::max({coef, std::abs(alpha(n, j)), std::abs(k(n, j))});
  }
  const auto& m = test::zero_model();
  double u = 0;
  for (double w : {0.5, 1.0, 10.0, 100.0, 1000.0})
    for (int j = 0; j <= g.M; j += 9) {
      const cplx e = std::exp(cplx(0, w * g.node(j)));
      u = std::max({u, std::abs(eval_uN(m, w, j) - e), std::abs(eval_auto(m, w, j) - e)});
    }
  const auto r = find_eigenvalues(m, 10);
  double lam = 0;
  for (const auto& e : r.eigenvalues) lam = std::max(lam, std::fabs(e.lambda - e.n * e.n));
  return {coef <= 1e-12 && u <= 1e-13 && lam <= 1e-12,
          fmt("q=0: max |beta|,|alpha|,|k| = %.1e (tol 1e-12), max |u_N - e^{iwx}| = %.1e (tol 1e-13), max "
              "|lambda_n - n^2| = %.1e (tol 1e-12)",
              coef, u, lam)};
}

Outcome criterion6() {
  const auto& m = test::one_model();
  double u = 0;
  for (double w : {2.0, 10.0, 50.0, 100.0})
    for (int j : {1998 / 4, 1998 / 2, 1998})
      u = std::max(u, std::abs(eval_uN(m, w, j) - test::constant_one_solution(w, m.grid().node(j))));
  const auto r = find_eigenvalues(m, 20);
  double lam = 0;
  for (const auto& e : r.eigenvalues) lam = std::max(lam, std::fabs(e.lambda - (1.0 + e.n * e.n)));
  return {u <= 1e-9 && lam <= 1e-9,
          fmt("q=1: max |u_N - closed form| = %.1e (tol 1e-9), max |lambda_n - (1+n^2)|, n<=20 = %.1e (tol 1e-9)", u,
              lam)};
}

Outcome criterion7() {
  const Grid g = make_grid(pi, 1998);
  const auto q = sample_real(g, [](double x) { return std::exp(x); });
  const auto pd = potential_data(q);
  const auto hs = solve_homogeneous(q);
  const auto phi = formal_powers_auto(hs.f0, hs.f1, 31);
  const auto l = legendre_coeffs(27);
  const auto beta = beta_coeffs(phi, l, 25, pd.x_min());
  const auto rec = alpha_table(pd, phi, beta, 27);
  const auto k = moments(pd, phi, 27);
  std::vector<std::vector<xcomplex>> dir;
  for (int n = 0; n <= 25; ++n) dir.push_back(alpha_direct(k, l, n, pd.x_min()));
  double rel = 0, inv = 0;
  for (int j = g.M / 4; j <= g.M; ++j) {
    for (int n = 0; n <= 25; ++n) rel = std::max(rel, test::rel_diff(to_cplx(dir[n][j]), rec(n, j)));
    const double x = g.node(j);
    for (int mm = 2; mm <= 23; ++mm) {
      const double m2 = mm;
      const cplx rhs = x * x *
                       (to_cplx(dir[mm + 2][j]) / ((2 * m2 + 3) * (2 * m2 + 5)) -
                        2.0 * to_cplx(dir[mm][j]) / ((2 * m2 - 1) * (2 * m2 + 3)) +
                        to_cplx(dir[mm - 2][j]) / ((2 * m2 - 3) * (2 * m2 - 1)));
      inv = std::max(inv, std::abs(rhs - beta(mm, j)));
    }
  }
  return {rel <= 1e-7 && inv <= 1e-9,
          fmt("max relative |alpha_rec - alpha_direct|, n<=25, x in [b/4,b] = %.1e (tol 1e-7); beta-from-alpha "
              "max |diff| = %.1e (tol 1e-9)",
              rel, inv)};
}

Outcome criterion8() {
  auto eps = [](int N) {
    const auto m = build_model(parse("exp(x)"), pi, 1998, ModelOptions{N, 1.0, 8});
    const auto ind = accuracy_indicators(m.potential(), m.alpha(), N + 2);
    return std::pair{ind.eps1.back(), ind.eps2.back()};
  };
  const auto [a1, a2] = eps(5);
  const auto [b1, b2] = eps(25);
  return {a1 >= 10 * b1 && a2 >= 10 * b2,
          fmt("eps1(pi): %.2e -> %.2e, eps2(pi): %.2e -> %.2e (N=5 -> 25, need a 10x drop)", a1, b1, a2, b2)};
}

Outcome criterion9() {
  double ident = 0, parity = 0, j0 = 0;
  for (cplx z : {cplx(1.0), cplx(5.5), cplx(20.0), cplx(3.0, 2.0)}) {
    const auto s = spherical_j_sequence(29, z);
    const auto t = spherical_j_sequence(29, -z);
    for (int n = 2; n <= 27; ++n) {
      const double m = n;
      const cplx lhs = s[n] / (z * z);
      const cplx rhs = s[n - 2] / ((2 * m - 1) * (2 * m + 1)) + 2.0 * s[n] / ((2 * m - 1) * (2 * m + 3)) +
                       s[n + 2] / ((2 * m + 1) * (2 * m + 3));
      ident = std::max(ident, test::rel_diff(lhs, rhs));
    }
    for (int n = 0; n <= 29; ++n) parity = std::max(parity, test::rel_diff(t[n], n % 2 ? -s[n] : s[n]));
    j0 = std::max(j0, test::rel_diff(s[0], std::sin(z) / z));
  }
  return {ident <= 1e-11 && parity <= 4e-16 && j0 <= 4e-16,
          fmt("j_n/z^2 identity max rel = %.1e (tol 1e-11); parity max rel = %.1e; j_0 closed form max rel = %.1e "
              "(round-off tol 4e-16)",
              ident, parity, j0)};
}

}  // namespace

int main(int argc, char** argv) {
  Outcome (*const checks[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                 criterion6, criterion7, criterion8, criterion9};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int c = 1; c <= 9; ++c) which.push_back(c);
  int failures = 0;
  for (int c : which) {
    if (c < 1 || c > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    Outcome o;
    try {
      o = checks[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
