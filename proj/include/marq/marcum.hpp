#pragma once

#include "marq/specfun.hpp"

namespace marq {

/// Arguments of the generalized Marcum Q-function Q_m(a, b).
struct MarcumArgs {
  double m;  // order, > 0
  double a;  // noncentrality amplitude, >= 0
  double b;  // threshold, >= 0

  void validate() const;
};

/// Generalized Marcum Q-function for real order m > 0.
///
/// Computed as the Poisson mixture of regularized upper incomplete gamma
/// tails, Q_m(a,b) = sum_n w_n Q(m+n, b^2/2) with
/// w_n = e^{-a^2/2} (a^2/2)^n / n!.  The index window is anchored at the
/// modal Poisson index and widened until the neglected tail mass is below
/// ctrl.rel_tol; the window is then summed in ascending order so the
/// incomplete-gamma recurrence only ever adds positive increments.
/// The result is clamped to [0,1]; a clamp larger than 1e-12 throws.
double marcum_q(const MarcumArgs& args, const sf::SeriesControl& ctrl = {});
double marcum_q(double m, double a, double b, const sf::SeriesControl& ctrl = {});

/// Q_m(0, b) for integer order: the finite sum
/// e^{-b^2/2} sum_{l=0}^{m-1} (b^2/2)^l / l!.
double marcum_q_zero_a(int m, double b);

/// Independent cross-check: adaptive quadrature of the defining integral
///   Q_m(a,b) = int_b^inf x (x/a)^{m-1} e^{-(x^2+a^2)/2} I_{m-1}(a x) dx
/// using the scaled Bessel kernel so the integrand never overflows.
/// Requires a > 0.
double marcum_q_bessel_oracle(const MarcumArgs& args, double tol);

}  // namespace marq
