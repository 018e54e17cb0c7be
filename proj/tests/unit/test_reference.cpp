#include <cmath>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "nsbf/reference.hpp"
#include "support.hpp"

using namespace nsbf;
using nsbf::test::pi;

TEST_SUITE("reference") {
  TEST_CASE("constant potential solutions") {
    const auto one = [](double) { return cplx(1.0); };
    for (cplx w : {cplx(0.0), cplx(0.5), cplx(3.0), cplx(40.0), cplx(5.0, 0.5)}) {
      const cplx want = w == cplx(0.0) ? cplx(std::cosh(pi)) : test::constant_one_solution(w, pi);
      CHECK(std::abs(reference_solution(one, w, pi) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
    CHECK(reference_solution(one, 3.0, 0.0) == cplx(1.0));
  }

  TEST_CASE("eigenvalues of closed-form problems") {
    const auto zero = [](double) { return 0.0; };
    const auto one = [](double) { return 1.0; };
    for (int n : {1, 2, 7, 50}) {
      CHECK(std::fabs(reference_eigenvalue(zero, pi, n) - n * n) <= 1e-9 * n * n);
      CHECK(std::fabs(reference_eigenvalue(one, pi, n) - (1.0 + n * n)) <= 1e-9 * n * n);
    }
    const auto v = reference_eigenvalues(one, 2.0, 6, 2);
    for (int n = 1; n <= 6; ++n) CHECK(v[n - 1] == doctest::Approx(1.0 + std::pow(n * pi / 2.0, 2)).epsilon(1e-11));
  }

  TEST_CASE("bad requests") {
    const auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(reference_eigenvalue(one, pi, 0), InvalidArgument);
    CHECK_THROWS_AS(reference_solution([](double) { return cplx(std::nan("")); }, 2.0, 1.0), OracleError);
  }
}
