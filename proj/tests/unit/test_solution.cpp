#include <cmath>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "nsbf/formal_powers.hpp"
#include "nsbf/reference.hpp"
#include "support.hpp"

using namespace nsbf;
using nsbf::test::pi;

namespace {

cplx oracle_exp(cplx w, double x) {
  return reference_solution([](double t) { return cplx(std::exp(t)); }, w, x);
}

}  // namespace

TEST_SUITE("solution") {
  TEST_CASE("model shape") {
    const auto& m = test::exp_model();
    CHECK(m.N() == 25);
    CHECK(m.alpha().row_count() >= m.N() + 3);
    CHECK(m.beta().row_count() >= m.N() + 1);
    CHECK(m.real_potential());
    CHECK_THROWS_AS(build_model(parse("1"), pi, 1998, ModelOptions{61, 1.0, 8}), LimitError);
  }

  TEST_CASE("trivial potential") {
    const auto& m = test::zero_model();
    for (int n = 0; n <= m.beta().row_count() - 1; ++n)
      for (int j = 0; j <= 1998; j += 3) CHECK(m.beta()(n, j) == cplx(0.0));
    for (int n = 0; n <= m.alpha().row_count() - 1; ++n)
      for (int j = 0; j <= 1998; j += 3) CHECK(m.alpha()(n, j) == cplx(0.0));
    for (cplx w : {cplx(0.5), cplx(3.0), cplx(40.0), cplx(2.0, 1.0)})
      for (int j : {0, 500, 1998}) {
        const cplx e = std::exp(cplx(0, 1) * w * m.grid().node(j));
        CHECK(std::abs(eval_uN(m, w, j) - e) <= 1e-13 * std::abs(e));
        CHECK(std::abs(eval_uN_tilde(m, w, j) - e) <= 1e-13 * std::abs(e));
        const cplx s = sine_solution(m, w, j);
        CHECK(std::abs(s - std::sin(w * m.grid().node(j)) / w) <= 1e-13 * std::max(1.0, std::abs(s)));
      }
    CHECK(m.epsN()[1998] == 0.0);
  }

  TEST_CASE("value at the origin") {
    const auto& m = test::exp_model();
    for (cplx w : {cplx(0.3), cplx(7.0), cplx(250.0), cplx(4.0, -1.5)}) {
      CHECK(std::abs(eval_uN(m, w, 0) - 1.0) <= 1e-14);
      CHECK(std::abs(eval_uN_tilde(m, w, 0) - 1.0) <= 1e-14);
      CHECK(std::abs(sine_solution(m, w, 0)) <= 1e-14);
    }
  }

  TEST_CASE("constant potential closed form") {
    const auto& m = test::one_model();
    for (double w : {2.0, 10.0, 50.0, 100.0})
      for (int j : {1998 / 4, 1998 / 2, 1998}) {
        const cplx want = test::constant_one_solution(w, m.grid().node(j));
        CHECK(std::abs(eval_uN(m, w, j) - want) <= 1e-10);
        CHECK(std::abs(eval_uN_tilde(m, w, j) - want) <= 1e-9);
      }
    const double lam = 1.0 + 9.0;
    const double w = std::sqrt(lam);
    CHECK(std::abs(sine_solution(m, w, 1998)) <= 1e-12);
    const double lam2 = 7.3;
    const cplx s = sine_solution(m, std::sqrt(lam2), 1998);
    CHECK(std::abs(s - std::sin(std::sqrt(lam2 - 1) * pi) / std::sqrt(lam2 - 1)) <= 1e-12);
  }

  TEST_CASE("dispatch and the zero-omega fallback") {
    const auto& one = test::one_model();
    CHECK(std::abs(eval_auto(one, 0.0, 1998) - std::cosh(pi)) <= 1e-10);
    CHECK_THROWS_AS(eval_uN(one, 0.0, 10), ZeroOmegaError);
    CHECK_THROWS_AS(evaluate(one, Representation::Improved, 0.0, 10), ZeroOmegaError);
    CHECK(evaluate(one, Representation::Plain, 0.0, 1998) == eval_uN_tilde(one, 0.0, 1998));

    const auto& m = test::exp_model();
    CHECK(eval_auto(m, 100.0, 1998) == eval_uN(m, 100.0, 1998));
    CHECK(eval_auto(m, 0.5, 1998) == eval_uN_tilde(m, 0.5, 1998));
    const cplx spps = spps_eval(m.formal_powers(), 1e-6, 1998, m.formal_powers().K_max);
    CHECK(std::abs(eval_auto(m, 1e-6, 1998) - spps) <= 1e-9);
  }

  TEST_CASE("exp potential against the ODE oracle") {
    const auto& m = test::exp_model();
    const cplx u10 = oracle_exp(10.0, pi);
    CHECK(std::abs(eval_uN_tilde(m, 10.0, 1998) - u10) <= 5e-8);
    for (double w : {5.0, 12.0, 40.0}) {
      const cplx u = oracle_exp(w, pi);
      CHECK(std::abs(eval_uN(m, w, 1998) - u) <= 1e-6);
      CHECK(std::abs(eval_uN_tilde(m, w, 1998) - u) <= 1e-6);
    }
  }

  TEST_CASE("conjugate symmetry for real potentials") {
    const auto& m = test::exp_model();
    for (double w : {0.4, 3.0, 60.0})
      for (int j : {400, 1998}) {
        CHECK(std::abs(eval_uN(m, -w, j) - std::conj(eval_uN(m, w, j))) <= 1e-14 * std::abs(eval_uN(m, w, j)));
        CHECK(std::abs(eval_uN_tilde(m, -w, j) - std::conj(eval_uN_tilde(m, w, j))) <= 1e-13 * std::abs(eval_uN_tilde(m, w, j)));
      }
  }

  TEST_CASE("omega-uniform accuracy") {
    const auto& m = test::exp_model();
    std::vector<double> lw, lr, scaled;
    for (double w : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
      const double r = std::abs(oracle_exp(w, pi) - eval_uN(m, w, 1998));
      lw.push_back(std::log(w));
      lr.push_back(std::log(r));
      scaled.push_back(w * w * r);
    }
    const double mx = *std::max_element(scaled.begin(), scaled.end());
    const double mn = *std::min_element(scaled.begin(), scaled.end());
    CHECK(mx / mn <= 50.0);
    // least-squares slope of log(w^2 r) against log(w)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
      const double y = lr[i] + 2 * lw[i];
      sx += lw[i];
      sy += y;
      sxx += lw[i] * lw[i];
      sxy += lw[i] * y;
    }
    const double n = static_cast<double>(lw.size());
    CHECK((n * sxy - sx * sy) / (n * sxx - sx * sx) <= 0.1);
  }

  TEST_CASE("tail estimate and error envelope") {
    const auto& m = test::exp_model();
    const auto m5 = build_model(parse("exp(x)"), pi, 1998, ModelOptions{5, 1.0, 8});
    CHECK(m.epsN()[1998] <= m5.epsN()[1998]);
    CHECK_THROWS_AS(epsN_surrogate(m, 9), MissingPrerequisite);
    CHECK(epsN_surrogate(m, 8) == m.epsN());

    for (double w : {100.0, 300.0, 1000.0}) {
      const double r = std::abs(oracle_exp(w, pi) - eval_uN(m, w, 1998));
      CHECK(w * w * r <= m.epsN()[1998] * std::sqrt(2 * pi) * 100);
    }
    const double env = error_envelope(m, 30.0, 1998);
    CHECK(env >= 0.0);
    CHECK(env == doctest::Approx(m.epsN()[1998] * std::sqrt(2 * pi) / 900.0).epsilon(1e-14));
    CHECK(std::fabs(error_envelope(m, cplx(30.0, 1e-12), 1998) - env) <= 1e-9 * env);
    const double c = error_envelope(m, cplx(3.0, 2.0), 1998);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
    CHECK_THROWS_AS(error_envelope(m, 0.0, 1998), ZeroOmegaError);
  }

  TEST_CASE("sine solution for complex potentials uses both signs of omega") {
    const Grid g = make_grid(pi, 1998);
    const auto q = sample(g, [](double x) { return cplx(std::exp(x), 0.5); });
    const auto m = build_model(q);
    CHECK_FALSE(m.real_potential());
    const cplx w = 6.0;
    const cplx s = sine_solution(m, w, 1998);
    CHECK(std::abs(s - (eval_auto(m, w, 1998) - eval_auto(m, -w, 1998)) / (2.0 * cplx(0, 1) * w)) <= 1e-15 * std::abs(s));
    const cplx ref = reference_solution([](double x) { return cplx(std::exp(x), 0.5); }, w, pi);
    CHECK(std::abs(eval_auto(m, w, 1998) - ref) <= 1e-6);
  }
}
