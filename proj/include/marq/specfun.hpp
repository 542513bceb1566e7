#pragma once

#include "marq/errors.hpp"

// Scalar special-function kernels: gamma family, Pochhammer symbol,
// Kummer 1F1, scaled modified Bessel I, and the Humbert confluent
// double-hypergeometric functions Phi1 / Phi2.
//
// All functions are pure; there is no global state and every routine is
// safe to call concurrently.

namespace marq::sf {

/// Truncation policy shared by every infinite series in the library.
/// A series stops once three consecutive terms fall below
/// rel_tol * |partial sum| (a single small term is not trusted because
/// hypergeometric terms can pass through zero).
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 10000;

  void validate() const;
};

/// Series value together with a truncation-error bound and the number of
/// terms that were summed.
struct SeriesResult {
  double value = 0.0;
  double trunc_bound = 0.0;
  int terms = 0;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation, relative error < 1e-14).
double ln_gamma(double x);

/// Gamma(x) for x > 0, via exp(ln_gamma).
double gamma_fn(double x);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.
double pochhammer(double x, int n);

double upper_inc_gamma(double s, double x);
double lower_inc_gamma(double s, double x);

/// Regularized incomplete gamma functions Q(s,x) and P(s,x), both in [0,1]
/// with Q + P = 1.  Series expansion for x < s+1, continued fraction for
/// x >= s+1.
double reg_upper(double s, double x);
double reg_lower(double s, double x);

/// Solves reg_upper(s, x) = q for x, q in (0,1).  Bracketed Newton with
/// bisection fallback; the returned x satisfies |reg_upper(s,x) - q| <= 1e-12.
double inv_reg_upper_gamma(double s, double q);

/// Kummer confluent hypergeometric 1F1(a; c; z).  For z < 0 the Kummer
/// transform 1F1(a;c;z) = e^z 1F1(c-a;c;-z) is applied so the series is
/// summed without cancellation.
double kummer_1f1(double a, double c, double z, const SeriesControl& ctrl = {});
SeriesResult kummer_1f1_ex(double a, double c, double z, const SeriesControl& ctrl = {});

/// e^{-x} I_nu(x) for nu > -1, x >= 0.  Power series with periodic
/// rescaling for small and moderate x, large-argument asymptotic expansion
/// once it is safely convergent.  Orders in (-1, 0) serve the Marcum
/// Bessel-integral oracle at order m < 1.
double bessel_i_scaled(double nu, double x, const SeriesControl& ctrl = {});

/// Humbert function of the first kind,
///   Phi1(alpha,beta,gamma; x,y) = sum_{m,n} (alpha)_{m+n}(beta)_m
///       x^m y^n / ((gamma)_{m+n} m! n!),  |x| < 1,
/// evaluated through the single-series reduction
///   sum_m (alpha)_m(beta)_m x^m/((gamma)_m m!) 1F1(alpha+m; gamma+m; y).
double humbert_phi1(double alpha, double beta, double gamma_c, double x, double y,
                    const SeriesControl& ctrl = {});
SeriesResult humbert_phi1_ex(double alpha, double beta, double gamma_c, double x, double y,
                             const SeriesControl& ctrl = {});

/// Humbert function of the second kind (entire in both variables),
///   Phi2(beta1,beta2,gamma; x,y) = sum_{m,n} (beta1)_m(beta2)_n
///       x^m y^n / ((gamma)_{m+n} m! n!),
/// via sum_m (beta1)_m x^m/((gamma)_m m!) 1F1(beta2; gamma+m; y).
double humbert_phi2(double beta1, double beta2, double gamma_c, double x, double y,
                    const SeriesControl& ctrl = {});
SeriesResult humbert_phi2_ex(double beta1, double beta2, double gamma_c, double x, double y,
                             const SeriesControl& ctrl = {});

}  // namespace marq::sf
