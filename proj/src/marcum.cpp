#include "marq/marcum.hpp"

#include <algorithm>
#include <cmath>

#include "marq/detail/kahan.hpp"
#include "marq/quadrature.hpp"

namespace marq {

void MarcumArgs::validate() const {
  if (!(m > 0.0)) throw domain_error("marcum_q: order m must be positive");
  if (!(a >= 0.0)) throw domain_error("marcum_q: a must be nonnegative");
  if (!(b >= 0.0)) throw domain_error("marcum_q: b must be nonnegative");
}

namespace {

// ln( t^s e^{-t} / Gamma(s+1) ), the Poisson-pmf-like exponent.  For large
// s the naive three-term form cancels thousands-magnitude terms down to
// O(1); the Stirling rearrangement keeps every term small:
//   s log1p((t-s)/s) - (t-s) - ln sqrt(2 pi s) - S(s)
// with S(s) the Stirling-series tail of lnGamma(s+1).
double ln_pmf_like(double s, double t) {
  if (s < 30.0) return s * std::log(t) - t - sf::ln_gamma(s + 1.0);
  const double inv = 1.0 / s;
  const double inv2 = inv * inv;
  const double stirling_tail =
      inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
  const double r = (t - s) / s;
  return s * std::log1p(r) - (t - s) - 0.5 * std::log(2.0 * M_PI * s) - stirling_tail;
}

}  // namespace

double marcum_q(const MarcumArgs& args, const sf::SeriesControl& ctrl) {
  args.validate();
  ctrl.validate();
  const double m = args.m;
  if (args.b == 0.0) return 1.0;
  const double h = 0.5 * args.b * args.b;
  if (args.a == 0.0) return sf::reg_upper(m, h);
  const double nu = 0.5 * args.a * args.a;

  // Index window around the modal Poisson index.  Left of the mode the
  // weights increase, so the mass below n is at most (n+1) w_n; right of
  // the mode the tail is bounded by the geometric sum w_n r/(1-r).
  const double mass_tol = 0.25 * ctrl.rel_tol;
  const int n_star = static_cast<int>(std::floor(nu));
  const double w_star = std::exp(ln_pmf_like(n_star, nu));

  int n_lo = n_star;
  double w_lo = w_star;
  while (n_lo > 0 && static_cast<double>(n_lo) * (w_lo * n_lo / nu) > mass_tol) {
    w_lo *= n_lo / nu;
    --n_lo;
  }
  int n_hi = n_star;
  {
    double w = w_star;
    for (;;) {
      const double r = nu / (n_hi + 1.0);
      if (r < 1.0 && w * r / (1.0 - r) <= mass_tol) break;
      w *= nu / (n_hi + 1.0);
      ++n_hi;
      if (n_hi - n_lo + 1 > ctrl.max_terms)
        throw no_convergence("marcum_q: Poisson window exceeded max_terms");
    }
  }

  // Ascending pass: weights by upward recurrence, incomplete-gamma tail by
  // the additive recurrence Q(s+1,h) = Q(s,h) + h^s e^{-h} / Gamma(s+1).
  const double s0 = m + n_lo;
  double q_s = sf::reg_upper(s0, h);
  double d = std::exp(ln_pmf_like(s0, h));
  double w = w_lo;
  detail::Kahan acc;
  for (int n = n_lo; n <= n_hi; ++n) {
    acc.add(w * q_s);
    w *= nu / (n + 1.0);
    q_s += d;
    d *= h / (m + n + 1.0);
  }

  double q = acc.sum;
  if (q > 1.0 + 1e-12 || q < -1e-12)
    throw no_convergence("marcum_q: result clamp exceeds 1e-12");
  return std::clamp(q, 0.0, 1.0);
}

double marcum_q(double m, double a, double b, const sf::SeriesControl& ctrl) {
  return marcum_q(MarcumArgs{m, a, b}, ctrl);
}

double marcum_q_zero_a(int m, double b) {
  if (m < 1) throw domain_error("marcum_q_zero_a: requires integer m >= 1");
  if (!(b >= 0.0)) throw domain_error("marcum_q_zero_a: requires b >= 0");
  const double h = 0.5 * b * b;
  if (h == 0.0) return 1.0;
  // log-sum-exp keeps the sum alive when e^{-h} underflows
  const double lh = std::log(h);
  double lmax = -h;
  for (int l = 1; l < m; ++l) lmax = std::max(lmax, l * lh - h - sf::ln_gamma(l + 1.0));
  detail::Kahan acc;
  for (int l = 0; l < m; ++l) {
    const double lt = (l == 0) ? -h : l * lh - h - sf::ln_gamma(l + 1.0);
    acc.add(std::exp(lt - lmax));
  }
  return std::min(1.0, std::exp(lmax) * acc.sum);
}

double marcum_q_bessel_oracle(const MarcumArgs& args, double tol) {
  args.validate();
  if (!(args.a > 0.0)) throw domain_error("marcum_q_bessel_oracle: requires a > 0");
  if (!(tol > 0.0)) throw domain_error("marcum_q_bessel_oracle: requires tol > 0");
  const double m = args.m, a = args.a, b = args.b;

  auto integrand = [m, a](double x) -> double {
    if (x <= 0.0) return 0.0;
    const double is = sf::bessel_i_scaled(m - 1.0, a * x);
    if (is <= 0.0) return 0.0;
    const double lg = std::log(x) + (m - 1.0) * (std::log(x) - std::log(a)) -
                      0.5 * (x - a) * (x - a) + std::log(is);
    return std::exp(lg);
  };

  // Beyond a + 42 the Gaussian factor e^{-(x-a)^2/2} underflows to zero.
  const double X = std::max(b + 10.0, a + 42.0);
  if (b >= X) return 0.0;

  quad::QuadratureControl qc;
  double total = 0.0;
  double err = 0.0;
  double lo = b;
  if (m < 1.0 && b < 1.0) {
    // x = t^2 removes the x^{m-1} endpoint singularity
    const double t_hi = std::sqrt(std::min(1.0, X));
    auto sub = [&integrand](double t) { return 2.0 * t * integrand(t * t); };
    const auto r = quad::integrate_adaptive(sub, std::sqrt(b), t_hi, 0.5 * tol, qc);
    total += r.value;
    err += r.abs_err_estimate;
    lo = std::min(1.0, X);
  }
  if (lo < X) {
    const auto r = quad::integrate_adaptive(integrand, lo, X, 0.5 * tol, qc);
    total += r.value;
    err += r.abs_err_estimate;
  }
  if (err > tol) throw quadrature_error("marcum_q_bessel_oracle: tolerance not achieved");
  return total;
}

}  // namespace marq
