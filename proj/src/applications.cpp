#include "marq/applications.hpp"

#include <algorithm>
#include <cmath>

#include "marq/marcum.hpp"

namespace marq {

void NakagamiChannel::validate() const {
  if (!(m >= 0.5)) throw domain_error("NakagamiChannel: requires m >= 0.5");
  if (!(gamma_bar > 0.0)) throw domain_error("NakagamiChannel: requires gamma_bar > 0");
}

void EnergyDetector::validate() const {
  if (!(u > 0.0)) throw domain_error("EnergyDetector: requires u > 0");
  if (!(lambda > 0.0)) throw domain_error("EnergyDetector: requires lambda > 0");
}

void SscDiversity::validate() const {
  if (!(rho >= 0.0) || !(rho < 1.0)) throw domain_error("SscDiversity: requires 0 <= rho < 1");
  if (!(gamma_t >= 0.0)) throw domain_error("SscDiversity: requires gamma_t >= 0");
}

double prob_false_alarm(double u, double lambda) {
  if (!(u > 0.0) || !(lambda > 0.0))
    throw domain_error("prob_false_alarm: requires u > 0 and lambda > 0");
  return sf::reg_upper(u, 0.5 * lambda);
}

double threshold_for_pf(double u, double pf) {
  if (!(u > 0.0)) throw domain_error("threshold_for_pf: requires u > 0");
  if (!(pf > 0.0) || !(pf < 1.0)) throw domain_error("threshold_for_pf: requires pf in (0,1)");
  return 2.0 * sf::inv_reg_upper_gamma(u, pf);
}

double prob_detection_awgn(double u, double gamma_snr, double lambda) {
  if (!(u > 0.0) || !(lambda > 0.0))
    throw domain_error("prob_detection_awgn: requires u > 0 and lambda > 0");
  if (!(gamma_snr >= 0.0)) throw domain_error("prob_detection_awgn: requires gamma >= 0");
  return marcum_q(u, std::sqrt(2.0 * gamma_snr), std::sqrt(lambda));
}

namespace {

double nakagami_log_prefactor(double m, double gbar) {
  return m * std::log(m) - m * std::log(gbar) - sf::ln_gamma(m);
}

}  // namespace

double avg_prob_detection(const NakagamiChannel& ch, const EnergyDetector& det,
                          const EvalOptions& opts) {
  ch.validate();
  det.validate();
  const IntegralSpec fs{Family::F, ch.m, det.u, std::sqrt(2.0), std::sqrt(det.lambda),
                        ch.m / ch.gamma_bar};
  const EvalOutcome o = eval_f(fs, opts);
  const double pd = std::exp(nakagami_log_prefactor(ch.m, ch.gamma_bar)) * o.value;
  if (pd > 1.0 + 1e-10 || pd < -1e-10)
    throw no_convergence("avg_prob_detection: clamp exceeds 1e-10");
  return std::clamp(pd, 0.0, 1.0);
}

std::vector<RocPoint> roc_curve(const NakagamiChannel& ch, double u,
                                std::vector<double> pf_grid, const EvalOptions& opts) {
  ch.validate();
  std::sort(pf_grid.begin(), pf_grid.end());
  std::vector<RocPoint> out;
  out.reserve(pf_grid.size());
  for (double pf : pf_grid) {
    const double lambda = threshold_for_pf(u, pf);
    const double pd = avg_prob_detection(ch, EnergyDetector{u, lambda}, opts);
    out.push_back({pf, pd, 1.0 - pd, lambda});
  }
  return out;
}

double cifr_r(const NakagamiChannel& ch, const SscDiversity& ssc, bool corrected,
              const EvalOptions& opts) {
  ch.validate();
  ssc.validate();
  const double m = ch.m, gbar = ch.gamma_bar;
  if (!(m > 1.0))
    throw domain_error("cifr_r: requires m > 1 (the embedded integral needs k = m-1 > 0)");

  const double term1 =
      m / (gbar * (m - 1.0)) * sf::reg_upper(m - 1.0, m * ssc.gamma_t / gbar);
  const IntegralSpec fs{Family::F,
                        m - 1.0,
                        m,
                        std::sqrt(2.0 * m * ssc.rho / ((1.0 - ssc.rho) * gbar)),
                        std::sqrt(2.0 * m * ssc.gamma_t / ((1.0 - ssc.rho) * gbar)),
                        m / gbar};
  const EvalOutcome o = eval_f(fs, opts);
  const double fterm = std::exp(nakagami_log_prefactor(m, gbar)) * o.value;
  double r = term1 - fterm;
  if (corrected) r += m / (gbar * (m - 1.0));
  return r;
}

double capacity_from_r(double bandwidth, double r) {
  if (!(bandwidth > 0.0)) throw domain_error("capacity: requires bandwidth > 0");
  if (!(r > 0.0))
    throw nonphysical_error("capacity: R must be positive (printed-form R can go "
                            "nonpositive; see the corrected variant)",
                            r);
  return bandwidth * std::log2(1.0 + 1.0 / r);
}

double cifr_capacity(double bandwidth, const NakagamiChannel& ch, const SscDiversity& ssc,
                     bool corrected, const EvalOptions& opts) {
  return capacity_from_r(bandwidth, cifr_r(ch, ssc, corrected, opts));
}

std::vector<std::vector<CapacityPoint>> capacity_curve(
    double bandwidth, const std::vector<double>& m_list,
    const std::vector<double>& snr_db_grid, const SscDiversity& ssc, bool corrected,
    const EvalOptions& opts) {
  std::vector<std::vector<CapacityPoint>> out;
  out.reserve(m_list.size());
  for (double m : m_list) {
    std::vector<CapacityPoint> curve;
    curve.reserve(snr_db_grid.size());
    for (double db : snr_db_grid) {
      const NakagamiChannel ch{m, std::pow(10.0, db / 10.0)};
      curve.push_back({db, cifr_capacity(bandwidth, ch, ssc, corrected, opts)});
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace marq
