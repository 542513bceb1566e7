#pragma once

#include <vector>

#include "marq/integrals.hpp"

// Wireless-communication endpoints: energy-detection ROC over Nakagami-m
// fading and CIFR capacity with correlated switch-and-stay combining.
// All SNR quantities are linear; dB conversion happens at the CLI boundary.

namespace marq {

struct NakagamiChannel {
  double m;          // fading figure, >= 0.5
  double gamma_bar;  // average SNR (linear), > 0

  void validate() const;
};

struct EnergyDetector {
  double u;       // time-bandwidth product, > 0
  double lambda;  // energy threshold, > 0

  void validate() const;
};

struct SscDiversity {
  double rho;      // branch correlation, in [0, 1)
  double gamma_t;  // switching threshold SNR (linear), >= 0

  void validate() const;
};

struct RocPoint {
  double pf;
  double pd_avg;
  double pmd;  // 1 - pd_avg
  double lambda;
};

struct CapacityPoint {
  double gamma_bar_db;
  double spectral_efficiency;  // bit/s/Hz
};

/// False-alarm probability of the energy detector, Q(u, lambda/2)
/// (regularized upper incomplete gamma, so the value stays in [0,1]).
double prob_false_alarm(double u, double lambda);

/// Threshold giving a target false-alarm probability:
/// lambda = 2 inv_reg_upper_gamma(u, pf).
double threshold_for_pf(double u, double pf);

/// Detection probability in AWGN at instantaneous SNR gamma:
/// Q_u(sqrt(2 gamma), sqrt(lambda)).
double prob_detection_awgn(double u, double gamma_snr, double lambda);

/// Average detection probability over Nakagami-m fading:
///   (m^m / (gbar^m Gamma(m))) * F(m, u, sqrt(2), sqrt(lambda), m/gbar).
/// Closed form when m or u is integer, quadrature otherwise.  The result
/// is clamped to [0,1]; a clamp beyond 1e-10 throws.
double avg_prob_detection(const NakagamiChannel& ch, const EnergyDetector& det,
                          const EvalOptions& opts = {});

/// ROC sweep: for each false-alarm target, the threshold, the average
/// detection probability and the missed-detection probability.
/// Output is ordered by pf ascending.
std::vector<RocPoint> roc_curve(const NakagamiChannel& ch, double u,
                                std::vector<double> pf_grid, const EvalOptions& opts = {});

/// E[1/gamma] term of CIFR capacity under correlated Nakagami-m SSC:
///   R = m Gamma(m-1, m gT/gbar) / (gbar Gamma(m))
///       - (m^m/(gbar^m Gamma(m))) F(m-1, m, a, b, m/gbar),
/// a = sqrt(2 m rho/((1-rho) gbar)), b = sqrt(2 m gT/((1-rho) gbar)).
/// This printed form omits the full-range int_0^inf p(gamma)/gamma dgamma
/// contribution and can be nonpositive; `corrected` adds the missing
/// m Gamma(m-1)/(gbar Gamma(m)) term.  Requires m > 1 (the embedded
/// integral needs k = m-1 > 0).
double cifr_r(const NakagamiChannel& ch, const SscDiversity& ssc, bool corrected = false,
              const EvalOptions& opts = {});

/// B log2(1 + 1/R); throws nonphysical_error when R <= 0.
double capacity_from_r(double bandwidth, double r);
double cifr_capacity(double bandwidth, const NakagamiChannel& ch, const SscDiversity& ssc,
                     bool corrected = false, const EvalOptions& opts = {});

/// Per-m capacity sweep over an SNR grid given in dB.
std::vector<std::vector<CapacityPoint>> capacity_curve(
    double bandwidth, const std::vector<double>& m_list,
    const std::vector<double>& snr_db_grid, const SscDiversity& ssc,
    bool corrected = false, const EvalOptions& opts = {});

}  // namespace marq
