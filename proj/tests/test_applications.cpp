#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "marq/applications.hpp"
#include "marq/marcum.hpp"
#include "marq/quadrature.hpp"
#include "support/checks.hpp"

using namespace marq;
using testsupport::rel_err;

namespace {

double nakagami_pref(double m, double gbar) {
  return std::exp(m * std::log(m) - m * std::log(gbar) - sf::ln_gamma(m));
}

// fading-average of the detection probability via the quadrature oracle
double avg_pd_quadrature(double m, double gbar, double u, double lambda) {
  const IntegralSpec fs{Family::F, m, u, std::sqrt(2.0), std::sqrt(lambda), m / gbar};
  return nakagami_pref(m, gbar) * quad::oracle_f(fs, 1e-12).value;
}

}  // namespace

TEST_CASE("false alarm probability") {
  CHECK(rel_err(prob_false_alarm(1.0, 2.0 * std::log(2.0)), 0.5) < 1e-14);
  CHECK(prob_false_alarm(3.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rel_err(prob_false_alarm(5.0, 10.0), sf::reg_upper(5.0, 5.0)) < 1e-15);
  CHECK_THROWS_AS(prob_false_alarm(0.0, 1.0), domain_error);
}

TEST_CASE("threshold inversion") {
  CHECK(rel_err(threshold_for_pf(1.0, 0.5), 2.0 * std::log(2.0)) < 1e-12);
  for (double u : {0.5, 1.0, 5.0})
    for (double pf : {1e-4, 0.01, 0.1, 0.5, 0.99}) {
      const double lambda = threshold_for_pf(u, pf);
      CHECK(std::abs(prob_false_alarm(u, lambda) - pf) <= 1e-10);
    }
  CHECK(threshold_for_pf(0.5, 0.99) > 0.0);
  CHECK(threshold_for_pf(0.5, 0.99) < 1e-3);
  CHECK_THROWS_AS(threshold_for_pf(5.0, 0.0), domain_error);
  CHECK_THROWS_AS(threshold_for_pf(5.0, 1.0), domain_error);
}

TEST_CASE("awgn detection probability") {
  // gamma = 0 reduces to the false-alarm probability
  CHECK(rel_err(prob_detection_awgn(1.0, 0.0, 2.0 * std::log(2.0)), 0.5) < 1e-13);
  // lambda -> 0 drives detection to 1
  CHECK(prob_detection_awgn(4.0, 2.0, 1e-13) == doctest::Approx(1.0).epsilon(1e-9));
  // mpmath reference for Q_5(sqrt(20), sqrt(15))
  CHECK(rel_err(prob_detection_awgn(5.0, 10.0, 15.0), 0.9543555736638068899) < 1e-13);
}

TEST_CASE("awgn detection vs noncentral chi-square Monte Carlo") {
  // X ~ sum of 2u squared normals, one with mean sqrt(2 gamma); P(X > lambda)
  const double u = 5.0, gamma = 10.0, lambda = 15.0;
  const int dims = static_cast<int>(2 * u);
  const double mean = std::sqrt(2.0 * gamma);
  std::mt19937_64 rng(20250809);
  std::normal_distribution<double> n01(0.0, 1.0);
  const int n_samples = 1000000;
  long hits = 0;
  for (int i = 0; i < n_samples; ++i) {
    double x = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double z = n01(rng) + (d == 0 ? mean : 0.0);
      x += z * z;
    }
    if (x > lambda) ++hits;
  }
  const double pd_mc = static_cast<double>(hits) / n_samples;
  const double pd = prob_detection_awgn(u, gamma, lambda);
  const double sigma = std::sqrt(pd * (1.0 - pd) / n_samples);
  CHECK(std::abs(pd_mc - pd) < 3.0 * sigma);
}

TEST_CASE("average detection probability") {
  // lambda -> 0 gives 1 under the average
  CHECK(avg_prob_detection({2.0, 10.0}, {5.0, 1e-12}) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Rayleigh m=1, u=1 against direct quadrature of the fading average
  {
    const double got = avg_prob_detection({1.0, 5.0}, {1.0, 2.0});
    CHECK(rel_err(got, avg_pd_quadrature(1.0, 5.0, 1.0, 2.0)) < 1e-9);
  }
  // mpmath reference (m=1, gbar=5, u=3, lambda=4)
  CHECK(rel_err(avg_prob_detection({1.0, 5.0}, {3.0, 4.0}), 0.9181234493075018594) <
        1e-11);

  // m=2, gbar = 10^1.5, u=5, lambda = threshold_for_pf(5, 0.1)
  {
    const double lambda = threshold_for_pf(5.0, 0.1);
    CHECK(rel_err(lambda, 15.98717917210526088) < 1e-11);
    const double pd = avg_prob_detection({2.0, std::pow(10.0, 1.5)}, {5.0, lambda});
    CHECK(rel_err(pd, 0.9607154511072898687) < 1e-11);
    CHECK(pd > 0.1);  // beats the false-alarm rate
    CHECK(pd < 1.0);
  }

  // detection beats blind guessing: avg pd >= pf on a configuration grid
  for (double u : {1.0, 3.0, 5.0})
    for (double lambda : {0.5, 4.0, 20.0})
      for (double m : {0.5, 1.0, 2.5})
        for (double gbar : {0.5, 5.0, 50.0}) {
          const double pf = prob_false_alarm(u, lambda);
          const double pd = avg_prob_detection({m, gbar}, {u, lambda});
          CHECK(pd >= pf - 1e-12);
        }

  // nondecreasing in gbar, nonincreasing in lambda
  const double gbars[] = {1.0, 3.0, 10.0, 30.0};
  for (size_t i = 0; i + 1 < 4; ++i)
    CHECK(avg_prob_detection({1.5, gbars[i + 1]}, {3.0, 8.0}) >=
          avg_prob_detection({1.5, gbars[i]}, {3.0, 8.0}) - 1e-12);
  const double lambdas[] = {1.0, 4.0, 12.0, 30.0};
  for (size_t i = 0; i + 1 < 4; ++i)
    CHECK(avg_prob_detection({1.5, 10.0}, {3.0, lambdas[i + 1]}) <=
          avg_prob_detection({1.5, 10.0}, {3.0, lambdas[i]}) + 1e-12);
}

TEST_CASE("roc curve") {
  const NakagamiChannel ch{2.0, std::pow(10.0, 1.5)};
  auto roc = roc_curve(ch, 5.0, {0.3, 0.01, 0.9999, 0.1});
  REQUIRE(roc.size() == 4);
  // ordered by pf ascending
  CHECK(roc[0].pf == 0.01);
  CHECK(roc[3].pf == 0.9999);
  for (const auto& pt : roc) {
    CHECK(pt.pmd == 1.0 - pt.pd_avg);
    CHECK(pt.lambda > 0.0);
  }
  // pd nondecreasing in pf; pf -> 1 drives pd -> 1
  for (size_t i = 0; i + 1 < roc.size(); ++i) CHECK(roc[i + 1].pd_avg >= roc[i].pd_avg);
  CHECK(roc[3].pd_avg > 0.999);

  // Fig-1 style ordering: pmd strictly decreasing in m at pf = 0.01
  double prev = 1.0;
  for (double m : {0.5, 1.0, 2.0, 5.0}) {
    const auto r = roc_curve({m, std::pow(10.0, 1.5)}, 5.0, {0.01});
    CHECK(r[0].pmd < prev);
    prev = r[0].pmd;
  }
}

TEST_CASE("cifr R examples") {
  // rho -> 0, gT -> 0: the printed form collapses to 0
  CHECK(std::abs(cifr_r({2.0, 10.0}, {0.0, 0.0})) < 1e-12);

  // mpmath references for the printed form
  CHECK(rel_err(cifr_r({2.0, 10.0}, {0.5, 1.0}), -0.02968214140846851159) < 1e-10);
  CHECK(rel_err(cifr_r({3.0, 31.62}, {0.0, 1.0}), -0.0001941841444709167295) < 1e-7);

  // rho = 0 reduction: second term = (m/gbar)(Gamma(m-1)/Gamma(m)) Q_m(0, b)
  {
    const double m = 3.0, gbar = 31.62, gT = 1.0;
    const double term1 = m / (gbar * (m - 1.0)) * sf::reg_upper(m - 1.0, m * gT / gbar);
    const double term2 =
        m / gbar / (m - 1.0) * marcum_q_zero_a(3, std::sqrt(2.0 * m * gT / gbar));
    CHECK(rel_err(cifr_r({m, gbar}, {0.0, gT}), term1 - term2) < 1e-12);
  }

  // corrected variant restores the dropped full-range term
  const double printed = cifr_r({2.0, 10.0}, {0.5, 1.0});
  const double corrected = cifr_r({2.0, 10.0}, {0.5, 1.0}, true);
  CHECK(rel_err(corrected - printed, 2.0 / (10.0 * 1.0)) < 1e-12);
  CHECK(rel_err(corrected, 0.1703178585915314884) < 1e-10);

  CHECK_THROWS_AS(cifr_r({1.0, 10.0}, {0.5, 1.0}), domain_error);
  CHECK_THROWS_AS(cifr_r({2.0, 10.0}, {1.0, 1.0}), domain_error);
}

TEST_CASE("capacity") {
  CHECK(rel_err(capacity_from_r(1.0, 1.0), 1.0) < 1e-15);
  CHECK(capacity_from_r(1.0, 1e12) < 2e-12);  // R -> inf gives 0 capacity
  CHECK_THROWS_AS(capacity_from_r(1.0, 0.0), nonphysical_error);
  CHECK_THROWS_AS(capacity_from_r(1.0, -0.3), nonphysical_error);
  try {
    capacity_from_r(1.0, -0.25);
  } catch (const nonphysical_error& e) {
    CHECK(e.offending_value() == -0.25);
  }

  // printed form is nonpositive on the Fig-2 configuration
  CHECK_THROWS_AS(cifr_capacity(1.0, {2.0, 10.0}, {0.5, 1.0}), nonphysical_error);
  // corrected variant: mpmath reference SE(m=3, gbar=10, gT=1, rho=0.5)
  CHECK(rel_err(cifr_capacity(1.0, {3.0, 10.0}, {0.5, 1.0}, true), 2.977196606769610903) <
        1e-10);
}

TEST_CASE("capacity curve") {
  const SscDiversity ssc{0.5, 1.0};
  CHECK(capacity_curve(1.0, {}, {0.0, 5.0}, ssc, true).empty());
  const auto one = capacity_curve(1.0, {2.0, 3.0}, {10.0}, ssc, true);
  REQUIRE(one.size() == 2);
  REQUIRE(one[0].size() == 1);
  CHECK(one[0][0].gamma_bar_db == 10.0);

  // strictly increasing in gbar over 0..25 dB and in m, corrected variant
  std::vector<double> dbs;
  for (int i = 0; i <= 25; ++i) dbs.push_back(i);
  const auto curves = capacity_curve(1.0, {2.0, 3.0, 4.0}, dbs, ssc, true);
  for (const auto& curve : curves)
    for (size_t i = 0; i + 1 < curve.size(); ++i)
      CHECK(curve[i + 1].spectral_efficiency > curve[i].spectral_efficiency);
  for (size_t i = 0; i < dbs.size(); ++i) {
    CHECK(curves[1][i].spectral_efficiency > curves[0][i].spectral_efficiency);
    CHECK(curves[2][i].spectral_efficiency > curves[1][i].spectral_efficiency);
  }
}

TEST_CASE("type validation") {
  const NakagamiChannel bad_m{0.4, 1.0};
  const NakagamiChannel bad_g{1.0, 0.0};
  const EnergyDetector bad_u{0.0, 1.0};
  const SscDiversity bad_rho{-0.1, 1.0};
  const SscDiversity bad_gt{0.5, -1.0};
  CHECK_THROWS_AS(bad_m.validate(), domain_error);
  CHECK_THROWS_AS(bad_g.validate(), domain_error);
  CHECK_THROWS_AS(bad_u.validate(), domain_error);
  CHECK_THROWS_AS(bad_rho.validate(), domain_error);
  CHECK_THROWS_AS(bad_gt.validate(), domain_error);
}
