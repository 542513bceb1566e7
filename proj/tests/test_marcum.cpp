#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "marq/marcum.hpp"
#include "support/checks.hpp"

using namespace marq;
using testsupport::rel_err;

TEST_CASE("boundary identities") {
  // Q_m(a, 0) = 1
  CHECK(marcum_q(2.5, 3.0, 0.0) == 1.0);
  CHECK(marcum_q(0.7, 0.0, 0.0) == 1.0);
  // Q_1(0, sqrt(2 ln 2)) = 1/2
  CHECK(rel_err(marcum_q(1.0, 0.0, std::sqrt(2.0 * std::log(2.0))), 0.5) < 1e-14);
  // Q_m(0, b) = reg_upper(m, b^2/2)
  for (double m : {0.5, 1.0, 2.0, 3.7, 10.0})
    for (double b : {0.2, 1.0, 2.5, 6.0})
      CHECK(rel_err(marcum_q(m, 0.0, b), sf::reg_upper(m, 0.5 * b * b)) < 1e-13);
}

TEST_CASE("reference values") {
  // mpmath Poisson-mixture references
  CHECK(rel_err(marcum_q(1.0, 1.0, 1.0), 0.7328798037968202183) < 1e-13);
  CHECK(rel_err(marcum_q(2.0, 1.0, 2.0), 0.5301469080839657248) < 1e-13);
  CHECK(rel_err(marcum_q(3.5, 2.0, 1.0), 0.9991335125970188001) < 1e-13);
  CHECK(rel_err(marcum_q(5.0, std::sqrt(20.0), std::sqrt(15.0)), 0.9543555736638068899) <
        1e-13);
}

TEST_CASE("finite sum at a = 0") {
  CHECK(rel_err(marcum_q_zero_a(1, 2.0), std::exp(-2.0)) < 1e-14);
  CHECK(marcum_q_zero_a(3, 0.0) == 1.0);
  CHECK(rel_err(marcum_q_zero_a(4, 1.5), marcum_q(4.0, 0.0, 1.5)) < 1e-13);
  for (int m : {1, 2, 5, 9})
    for (double b : {0.1, 1.0, 3.0, 6.0, 40.0})
      CHECK(rel_err(marcum_q_zero_a(m, b), sf::reg_upper(m, 0.5 * b * b)) < 1e-13);
  CHECK_THROWS_AS(marcum_q_zero_a(0, 1.0), domain_error);
}

TEST_CASE("bessel-integral oracle") {
  // a -> 0 limit: Q_1(0,1) = e^{-1/2}
  CHECK(std::abs(marcum_q_bessel_oracle({1.0, 0.001, 1.0}, 1e-11) -
                 std::exp(-0.5)) < 1e-5);
  CHECK(std::abs(marcum_q_bessel_oracle({2.0, 1.0, 2.0}, 1e-11) -
                 marcum_q(2.0, 1.0, 2.0)) < 1e-10);
  CHECK(std::abs(marcum_q_bessel_oracle({3.5, 2.0, 1.0}, 1e-11) -
                 marcum_q(3.5, 2.0, 1.0)) < 1e-10);
  CHECK_THROWS_AS(marcum_q_bessel_oracle({1.0, 0.0, 1.0}, 1e-10), domain_error);
}

TEST_CASE("series vs oracle on a grid") {
  for (double m : {0.5, 1.0, 3.0, 8.0})
    for (double a : {0.5, 1.5, 3.0, 5.0})
      for (double b : {0.5, 1.5, 3.0, 5.5}) {
        const double q = marcum_q(m, a, b);
        const double o = marcum_q_bessel_oracle({m, a, b}, 1e-11);
        CHECK(std::abs(q - o) < 1e-9);
      }
}

TEST_CASE("bounds and monotonicity") {
  const double ms[] = {0.5, 1.0, 2.0, 4.5, 10.0};
  const double xs[] = {0.0, 0.7, 1.5, 3.0, 4.5, 6.0};
  for (double m : ms)
    for (double a : xs)
      for (double b : xs) {
        const double q = marcum_q(m, a, b);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
      }
  // nondecreasing in a, nonincreasing in b, nondecreasing in m
  for (double m : ms)
    for (double b : xs)
      for (size_t i = 0; i + 1 < 6; ++i)
        CHECK(marcum_q(m, xs[i + 1], b) >= marcum_q(m, xs[i], b) - 1e-12);
  for (double m : ms)
    for (double a : xs)
      for (size_t i = 0; i + 1 < 6; ++i)
        CHECK(marcum_q(m, a, xs[i + 1]) <= marcum_q(m, a, xs[i]) + 1e-12);
  for (double a : xs)
    for (double b : xs)
      for (size_t i = 0; i + 1 < 5; ++i)
        CHECK(marcum_q(ms[i + 1], a, b) >= marcum_q(ms[i], a, b) - 1e-12);
}

TEST_CASE("series vs oracle on random arguments") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> um(0.5, 12.0), ua(0.05, 8.0), ub(0.05, 8.0);
  for (int i = 0; i < 80; ++i) {
    const double m = um(rng), a = ua(rng), b = ub(rng);
    const double q = marcum_q(m, a, b);
    const double o = marcum_q_bessel_oracle({m, a, b}, 1e-11);
    CHECK(std::abs(q - o) < 1e-9);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(marcum_q(0.0, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(marcum_q(-1.0, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(marcum_q(1.0, -0.1, 1.0), domain_error);
  CHECK_THROWS_AS(marcum_q(1.0, 1.0, -0.1), domain_error);
}
