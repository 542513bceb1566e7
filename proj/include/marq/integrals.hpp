#pragma once

#include "marq/integral_types.hpp"
#include "marq/specfun.hpp"

// Closed-form evaluators for the two integral families and a
// validity-aware dispatcher.  Each evaluator composes its prefactors in
// log-domain and exponentiates once, so large k and m do not overflow.

namespace marq {

/// G(k,m,a,b,p) for integer Marcum order m >= 1 and real k > 0:
///   Gamma(k)/p^k - (2/(b^2+2p))^k e^{-a^2/2} Gamma(k)
///     * [Phi1(k,1,1; x,y) - sum_{n<m} (k)_n x^n/n! 1F1(k+n; n+1; y)],
/// x = b^2/(b^2+2p), y = a^2 b^2/(2b^2+4p).  The bracket is a head-free
/// tail of Phi1's own expansion, so it is summed directly as
/// sum_{n>=m} (k)_n x^n/n! 1F1(k+n; n+1; y) (all terms positive).
double eval_g_thm1(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl = {});

/// G(k,m,a,b,p) for integer k >= 1 and real order m > 0:
///   Gamma(k)/p^k - Gamma(k) b^{2m} e^{-a^2/2} / (p^k (b^2+2p)^m)
///     * sum_{l<k} (m)_l (2p)^l / (l! (b^2+2p)^l) 1F1(l+m; m; y).
double eval_g_thm2(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl = {});

/// F(k,m,a,b,p) for integer k >= 1 and real order m > 0:
///   Gamma(k) Q(m, b^2/2)/p^k + a^2 b^{2m} Gamma(k) e^{-b^2/2}
///     / (Gamma(m+1) p^k 2^m (a^2+2p))
///     * sum_{l<k} (2p/(a^2+2p))^l 1F1(l+1; m+1; z),
/// z = a^2 b^2/(2a^2+4p).  Both terms are nonnegative.
double eval_f_eq15(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl = {});

/// F(k,m,a,b,p) for integer order m >= 1 and real k > 0:
///   Gamma(k)/p^k - 2^k Gamma(k) e^{-b^2/2}/(a^2+2p)^k
///     * [Phi2(1,k,1; b^2/2, z) - sum_{n<m} (b^2/2)^n/n! 1F1(k; n+1; z)],
/// with the bracket summed as the tail sum_{n>=m} of Phi2's expansion.
double eval_f_thm3(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl = {});

/// F(1,m,a,b,p) for real order m > 0:
///   Q(m, b^2/2)/p + a^2 e^{-p b^2/(a^2+2p)} gamma_low(m, z)
///     / (p a^{2m} Gamma(m) (a^2+2p)^{1-m}).
/// At a = 0 the second term vanishes as gamma_low(m,z) ~ z^m/m; that limit
/// is taken analytically so a^{-2m} never overflows.
double eval_f_k1(double m, double a, double b, double p,
                 const sf::SeriesControl& ctrl = {});

/// G(k,m,0,b,p) for integer m >= 1: the exact finite sum
///   (2/(b^2+2p))^k sum_{l<m} b^{2l} Gamma(k+l) / (l! (b^2+2p)^l).
double eval_g_a0(double k, int m, double b, double p);

/// F(k,m,0,b,p) for integer m >= 1: Gamma(k)/p^k * Q_m(0,b).
double eval_f_a0(double k, int m, double b, double p);

/// G(k,m,a,0,p) = F(k,m,a,0,p) = Gamma(k)/p^k.
double eval_b0(double k, double p);

struct EvalOptions {
  IntegralityPolicy policy{};
  sf::SeriesControl series{};
  // Absolute tolerance for the quadrature fallback; <= 0 means
  // auto-scaled from Gamma(k)/p^k.
  double oracle_tol = 0.0;
};

/// Validity-aware dispatchers.  Routing order: b=0 -> Lemma3; a=0 with
/// integer m -> Lemma2; k=1 (F) -> Lemma1; integer k -> finite-sum formula
/// (Thm2 / Eq15); integer m -> Phi-series formula (Thm1 / Thm3); otherwise
/// quadrature.  A closed form whose leading terms cancel past 1e6*eps, or
/// that fails to converge, is rerouted to the quadrature oracle.
EvalOutcome eval_g(const IntegralSpec& spec, const EvalOptions& opts = {});
EvalOutcome eval_f(const IntegralSpec& spec, const EvalOptions& opts = {});

/// Routes on spec.family.
EvalOutcome eval_integral(const IntegralSpec& spec, const EvalOptions& opts = {});

/// Forces one evaluation path (Thm1, Thm2, Eq15, Thm3 or Oracle),
/// validating the path's family and integrality requirements.  Unlike the
/// dispatcher there is no rerouting: series failures propagate.
EvalOutcome eval_with_method(const IntegralSpec& spec, Method method,
                             const EvalOptions& opts = {});

}  // namespace marq
