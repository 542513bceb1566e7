#pragma once

#include <functional>

#include "marq/integral_types.hpp"

// Independent ground truth: adaptive Gauss-Kronrod quadrature of the
// defining integrals over [0, inf).

namespace marq::quad {

struct QuadratureResult {
  double value = 0.0;
  double abs_err_estimate = 0.0;
  long evaluations = 0;
  double truncation_point = 0.0;
};

struct QuadratureControl {
  int max_panels = 10000;
  // Refinement also stops once the error estimate falls below
  // rel_floor * |integral|, so tiny absolute tolerances cannot force
  // unbounded subdivision.
  double rel_floor = 1e-12;
};

/// Adaptive 15-point Gauss-Kronrod integration of f over a finite interval,
/// bisecting the worst panel until every panel error is below
/// max(abs_tol, rel_floor*|I|) / #panels.  Deterministic refinement order.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                    double hi, double abs_tol,
                                    const QuadratureControl& ctrl = {});

/// Integrates f over [0, inf) for integrands bounded by x^{k-1} e^{-p x}.
/// The interval is truncated at X with Gamma(k, pX)/p^k < abs_tol/10
/// (analytic tail bound, sup of the remaining factor taken as 1); for
/// k < 1 the integrable endpoint singularity is removed by the x = t^2
/// substitution on the first subinterval.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double power_k, double decay_p, double abs_tol,
                                         const QuadratureControl& ctrl = {});

/// Quadrature of the defining integral of G (resp. F) to absolute
/// tolerance tol.
QuadratureResult oracle_g(const IntegralSpec& spec, double tol,
                          const QuadratureControl& ctrl = {});
QuadratureResult oracle_f(const IntegralSpec& spec, double tol,
                          const QuadratureControl& ctrl = {});

}  // namespace marq::quad
