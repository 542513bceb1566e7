#include "marq/integrals.hpp"

#include <cmath>
#include <limits>

#include "marq/detail/kahan.hpp"
#include "marq/marcum.hpp"
#include "marq/quadrature.hpp"

namespace marq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Leading-term cancellation past this ratio reroutes the dispatcher to the
// quadrature oracle.
constexpr double kCancelLimit = 1e6;

struct Closed {
  double value;
  double err;    // propagated series truncation + rounding estimate
  double big;    // magnitude of the largest composed term (cancellation diagnosis)
};

bool near_int(double x, double tol, int& out) {
  const double r = std::round(x);
  if (std::abs(x - r) <= tol && r >= 1.0 && r <= 2147483000.0) {
    out = static_cast<int>(r);
    return true;
  }
  return false;
}

Closed g_thm1_impl(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  if (!(k > 0.0) || !(p > 0.0)) throw domain_error("eval_g_thm1: requires k > 0, p > 0");
  if (m < 1) throw domain_error("eval_g_thm1: requires integer m >= 1");
  if (!(a >= 0.0) || !(b >= 0.0)) throw domain_error("eval_g_thm1: requires a, b >= 0");
  ctrl.validate();

  const double bb = b * b;
  const double x = bb / (bb + 2.0 * p);
  const double y = a * a * bb / (2.0 * (bb + 2.0 * p));

  // Tail of Phi1's reduction from n = m: Phi1(k,1,1;x,y) minus the
  // subtracted head equals sum_{n>=m} (k)_n x^n/n! 1F1(k+n; n+1; y),
  // which is summed directly (all terms positive, no cancellation).
  // Term ratios are bounded by x (k+n+1)/(n+2) — the 1F1 factor decreases
  // in n — so the geometric remainder is driven below machine epsilon:
  // the outer subtraction can amplify any leftover tail by ~1/(1-x)·scale.
  double coef = 1.0;
  for (int n = 0; n < m; ++n) coef *= (k + n) * x / (n + 1.0);
  detail::Kahan tail;
  double inner_trunc = 0.0;
  double remaining = 0.0;
  bool done = false;
  for (int n = m; n < m + ctrl.max_terms; ++n) {
    const sf::SeriesResult fr = sf::kummer_1f1_ex(k + n, n + 1.0, y, ctrl);
    const double term = coef * fr.value;
    tail.add(term);
    inner_trunc += coef * fr.trunc_bound;
    const double ratio = x * (k + n + 1.0) / (n + 2.0);
    if (ratio < 1.0) {
      remaining = term * ratio / (1.0 - ratio);
      if (remaining <= 0.25 * kEps * tail.sum) {
        done = true;
        break;
      }
    }
    coef *= (k + n) * x / (n + 1.0);
  }
  if (!done) throw no_convergence("eval_g_thm1: bracket series exceeded max_terms");
  inner_trunc += remaining;

  const double t1 = std::exp(sf::ln_gamma(k) - k * std::log(p));
  const double lpref = k * std::log(2.0 / (bb + 2.0 * p)) - 0.5 * a * a + sf::ln_gamma(k);
  const double t2 = std::exp(lpref) * tail.sum;
  const double err = kEps * 8.0 * (t1 + std::abs(t2)) + std::exp(lpref) * inner_trunc;
  return {std::max(t1 - t2, 0.0), err, std::max(t1, std::abs(t2))};
}

Closed g_thm2_impl(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  if (k < 1) throw domain_error("eval_g_thm2: requires integer k >= 1");
  if (!(m > 0.0) || !(p > 0.0)) throw domain_error("eval_g_thm2: requires m > 0, p > 0");
  if (!(a >= 0.0) || !(b >= 0.0)) throw domain_error("eval_g_thm2: requires a, b >= 0");
  ctrl.validate();

  const double t1 = std::exp(sf::ln_gamma(k) - k * std::log(p));
  if (b == 0.0) return {t1, kEps * 2.0 * t1, t1};

  const double bb = b * b;
  const double y = a * a * bb / (2.0 * (bb + 2.0 * p));
  const double w = 2.0 * p / (bb + 2.0 * p);
  detail::Kahan sum;
  double inner_trunc = 0.0;
  double coef = 1.0;  // (m)_l w^l / l!
  for (int l = 0; l < k; ++l) {
    const sf::SeriesResult fr = sf::kummer_1f1_ex(l + m, m, y, ctrl);
    sum.add(coef * fr.value);
    inner_trunc += coef * fr.trunc_bound;
    coef *= (m + l) * w / (l + 1.0);
  }
  const double lpref = sf::ln_gamma(k) + m * std::log(bb) - k * std::log(p) -
                       m * std::log(bb + 2.0 * p) - 0.5 * a * a;
  const double t2 = std::exp(lpref) * sum.sum;
  const double err = kEps * 8.0 * (t1 + std::abs(t2)) + std::exp(lpref) * inner_trunc;
  return {std::max(t1 - t2, 0.0), err, std::max(t1, std::abs(t2))};
}

Closed f_eq15_impl(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  if (k < 1) throw domain_error("eval_f_eq15: requires integer k >= 1");
  if (!(m > 0.0) || !(p > 0.0)) throw domain_error("eval_f_eq15: requires m > 0, p > 0");
  if (!(a >= 0.0) || !(b >= 0.0)) throw domain_error("eval_f_eq15: requires a, b >= 0");
  ctrl.validate();

  const double gk_pk = std::exp(sf::ln_gamma(k) - k * std::log(p));
  const double t1 = gk_pk * sf::reg_upper(m, 0.5 * b * b);
  if (a == 0.0 || b == 0.0) return {t1, kEps * 4.0 * t1, t1};

  const double z = a * a * b * b / (2.0 * (a * a + 2.0 * p));
  const double w = 2.0 * p / (a * a + 2.0 * p);
  detail::Kahan sum;
  double inner_trunc = 0.0;
  double coef = 1.0;  // w^l
  for (int l = 0; l < k; ++l) {
    const sf::SeriesResult fr = sf::kummer_1f1_ex(l + 1.0, m + 1.0, z, ctrl);
    sum.add(coef * fr.value);
    inner_trunc += coef * fr.trunc_bound;
    coef *= w;
  }
  const double lpref = std::log(a * a) + m * std::log(b * b) + sf::ln_gamma(k) -
                       0.5 * b * b - sf::ln_gamma(m + 1.0) - k * std::log(p) -
                       m * M_LN2 - std::log(a * a + 2.0 * p);
  const double t2 = std::exp(lpref) * sum.sum;
  // additive composition: both terms nonnegative
  const double err = kEps * 8.0 * (t1 + t2) + std::exp(lpref) * inner_trunc;
  return {t1 + t2, err, std::max(t1, t2)};
}

Closed f_thm3_impl(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  if (!(k > 0.0) || !(p > 0.0)) throw domain_error("eval_f_thm3: requires k > 0, p > 0");
  if (m < 1) throw domain_error("eval_f_thm3: requires integer m >= 1");
  if (!(a >= 0.0) || !(b >= 0.0)) throw domain_error("eval_f_thm3: requires a, b >= 0");
  ctrl.validate();

  const double t1 = std::exp(sf::ln_gamma(k) - k * std::log(p));
  if (b == 0.0) return {t1, kEps * 2.0 * t1, t1};

  const double z = a * a * b * b / (2.0 * (a * a + 2.0 * p));
  const double x2 = 0.5 * b * b;
  // Tail of Phi2's reduction from n = m (all terms positive).  Term ratios
  // are bounded by x2/(n+2) since 1F1(k; c; z) decreases in c, so the
  // geometric remainder is pushed below machine epsilon as in Thm 1.
  double coef = 1.0;
  for (int n = 0; n < m; ++n) coef *= x2 / (n + 1.0);
  detail::Kahan tail;
  double inner_trunc = 0.0;
  double remaining = 0.0;
  bool done = false;
  for (int n = m; n < m + ctrl.max_terms; ++n) {
    const sf::SeriesResult fr = sf::kummer_1f1_ex(k, n + 1.0, z, ctrl);
    const double term = coef * fr.value;
    tail.add(term);
    inner_trunc += coef * fr.trunc_bound;
    const double ratio = x2 / (n + 2.0);
    if (ratio < 1.0) {
      remaining = term * ratio / (1.0 - ratio);
      if (remaining <= 0.25 * kEps * tail.sum) {
        done = true;
        break;
      }
    }
    coef *= x2 / (n + 1.0);
  }
  if (!done) throw no_convergence("eval_f_thm3: bracket series exceeded max_terms");
  inner_trunc += remaining;

  const double lpref =
      k * M_LN2 + sf::ln_gamma(k) - x2 - k * std::log(a * a + 2.0 * p);
  const double t2 = std::exp(lpref) * tail.sum;
  const double err = kEps * 8.0 * (t1 + std::abs(t2)) + std::exp(lpref) * inner_trunc;
  return {std::max(t1 - t2, 0.0), err, std::max(t1, std::abs(t2))};
}

Closed f_k1_impl(double m, double a, double b, double p, const sf::SeriesControl& ctrl) {
  if (!(m > 0.0) || !(p > 0.0)) throw domain_error("eval_f_k1: requires m > 0, p > 0");
  if (!(a >= 0.0) || !(b >= 0.0)) throw domain_error("eval_f_k1: requires a, b >= 0");
  ctrl.validate();

  const double t1 = sf::reg_upper(m, 0.5 * b * b) / p;
  if (a == 0.0 || b == 0.0) return {t1, kEps * 4.0 * t1, t1};

  const double aa = a * a;
  const double z = aa * b * b / (2.0 * (aa + 2.0 * p));
  const double rl = sf::reg_lower(m, z);
  double t2;
  if (rl > 0.0) {
    t2 = std::exp((m - 1.0) * std::log((aa + 2.0 * p) / aa) - p * b * b / (aa + 2.0 * p) -
                  std::log(p) + std::log(rl));
  } else {
    // z underflowed reg_lower; gamma_low(m,z) ~ z^m/m gives the stable limit
    t2 = std::exp(std::log(aa / (aa + 2.0 * p)) + m * std::log(0.5 * b * b) -
                  p * b * b / (aa + 2.0 * p) - std::log(p) - sf::ln_gamma(m + 1.0));
  }
  return {t1 + t2, kEps * 8.0 * (t1 + t2), std::max(t1, t2)};
}

Closed g_a0_impl(double k, int m, double b, double p) {
  if (!(k > 0.0) || !(p > 0.0)) throw domain_error("eval_g_a0: requires k > 0, p > 0");
  if (m < 1) throw domain_error("eval_g_a0: requires integer m >= 1");
  if (!(b >= 0.0)) throw domain_error("eval_g_a0: requires b >= 0");

  const double bb = b * b;
  detail::Kahan sum;
  double t = std::exp(k * std::log(2.0 / (bb + 2.0 * p)) + sf::ln_gamma(k));
  for (int l = 0; l < m; ++l) {
    sum.add(t);
    t *= bb * (k + l) / ((l + 1.0) * (bb + 2.0 * p));
  }
  return {sum.sum, kEps * 8.0 * sum.sum * m, sum.sum};
}

Closed f_a0_impl(double k, int m, double b, double p) {
  if (!(k > 0.0) || !(p > 0.0)) throw domain_error("eval_f_a0: requires k > 0, p > 0");
  if (m < 1) throw domain_error("eval_f_a0: requires integer m >= 1");
  if (!(b >= 0.0)) throw domain_error("eval_f_a0: requires b >= 0");
  const double v = std::exp(sf::ln_gamma(k) - k * std::log(p)) * marcum_q_zero_a(m, b);
  return {v, kEps * 8.0 * v * m, v};
}

double oracle_auto_tol(const IntegralSpec& spec, const EvalOptions& opts) {
  if (opts.oracle_tol > 0.0) return opts.oracle_tol;
  const double upper = std::exp(sf::ln_gamma(spec.k) - spec.k * std::log(spec.p));
  return std::max(1e-13 * upper, 1e-14);
}

EvalOutcome run_oracle(const IntegralSpec& spec, const EvalOptions& opts) {
  const double tol = oracle_auto_tol(spec, opts);
  const quad::QuadratureResult r = (spec.family == Family::G)
                                       ? quad::oracle_g(spec, tol)
                                       : quad::oracle_f(spec, tol);
  return {r.value, Method::Oracle, r.abs_err_estimate};
}

// Accepts a closed-form result unless it is non-finite or its leading
// terms cancelled past kCancelLimit.
bool acceptable(const Closed& c) {
  if (!std::isfinite(c.value)) return false;
  return c.big <= kCancelLimit * std::max(std::abs(c.value), 1e-300);
}

}  // namespace

void IntegralSpec::validate() const {
  if (!(k > 0.0)) throw domain_error("IntegralSpec: requires k > 0");
  if (!(p > 0.0)) throw domain_error("IntegralSpec: requires p > 0");
  if (!(m >= 0.5)) throw domain_error("IntegralSpec: requires m >= 0.5");
  if (!(a >= 0.0)) throw domain_error("IntegralSpec: requires a >= 0");
  if (!(b >= 0.0)) throw domain_error("IntegralSpec: requires b >= 0");
}

void IntegralityPolicy::validate() const {
  if (!(tol > 0.0) || !(tol < 0.5)) throw domain_error("IntegralityPolicy: tol must be in (0, 0.5)");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Thm1: return "Thm1";
    case Method::Thm2: return "Thm2";
    case Method::Eq15: return "Eq15";
    case Method::Thm3: return "Thm3";
    case Method::Lemma1: return "Lemma1";
    case Method::Lemma2_G: return "Lemma2_G";
    case Method::Lemma2_F: return "Lemma2_F";
    case Method::Lemma3: return "Lemma3";
    case Method::Oracle: return "Oracle";
  }
  return "?";
}

double eval_g_thm1(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  return g_thm1_impl(k, m, a, b, p, ctrl).value;
}

double eval_g_thm2(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  return g_thm2_impl(k, m, a, b, p, ctrl).value;
}

double eval_f_eq15(int k, double m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  return f_eq15_impl(k, m, a, b, p, ctrl).value;
}

double eval_f_thm3(double k, int m, double a, double b, double p,
                   const sf::SeriesControl& ctrl) {
  return f_thm3_impl(k, m, a, b, p, ctrl).value;
}

double eval_f_k1(double m, double a, double b, double p, const sf::SeriesControl& ctrl) {
  return f_k1_impl(m, a, b, p, ctrl).value;
}

double eval_g_a0(double k, int m, double b, double p) { return g_a0_impl(k, m, b, p).value; }

double eval_f_a0(double k, int m, double b, double p) { return f_a0_impl(k, m, b, p).value; }

double eval_b0(double k, double p) {
  if (!(k > 0.0) || !(p > 0.0)) throw domain_error("eval_b0: requires k > 0, p > 0");
  return std::exp(sf::ln_gamma(k) - k * std::log(p));
}

EvalOutcome eval_g(const IntegralSpec& spec, const EvalOptions& opts) {
  spec.validate();
  opts.policy.validate();
  if (spec.family != Family::G) throw domain_error("eval_g: spec.family must be G");

  if (spec.b == 0.0) {
    const double v = eval_b0(spec.k, spec.p);
    return {v, Method::Lemma3, kEps * 2.0 * v};
  }
  int ki = 0, mi = 0;
  const bool k_int = near_int(spec.k, opts.policy.tol, ki);
  const bool m_int = near_int(spec.m, opts.policy.tol, mi);

  if (spec.a == 0.0 && m_int) {
    const Closed c = g_a0_impl(spec.k, mi, spec.b, spec.p);
    return {c.value, Method::Lemma2_G, c.err};
  }
  try {
    if (k_int) {
      const Closed c = g_thm2_impl(ki, spec.m, spec.a, spec.b, spec.p, opts.series);
      if (acceptable(c)) return {c.value, Method::Thm2, c.err};
    } else if (m_int) {
      const Closed c = g_thm1_impl(spec.k, mi, spec.a, spec.b, spec.p, opts.series);
      if (acceptable(c)) return {c.value, Method::Thm1, c.err};
    }
  } catch (const no_convergence&) {
    // fall through to the oracle
  }
  return run_oracle(spec, opts);
}

EvalOutcome eval_f(const IntegralSpec& spec, const EvalOptions& opts) {
  spec.validate();
  opts.policy.validate();
  if (spec.family != Family::F) throw domain_error("eval_f: spec.family must be F");

  if (spec.b == 0.0) {
    const double v = eval_b0(spec.k, spec.p);
    return {v, Method::Lemma3, kEps * 2.0 * v};
  }
  int ki = 0, mi = 0;
  const bool k_int = near_int(spec.k, opts.policy.tol, ki);
  const bool m_int = near_int(spec.m, opts.policy.tol, mi);

  if (spec.a == 0.0 && m_int) {
    const Closed c = f_a0_impl(spec.k, mi, spec.b, spec.p);
    return {c.value, Method::Lemma2_F, c.err};
  }
  try {
    if (k_int && ki == 1) {
      const Closed c = f_k1_impl(spec.m, spec.a, spec.b, spec.p, opts.series);
      if (acceptable(c)) return {c.value, Method::Lemma1, c.err};
    } else if (k_int) {
      const Closed c = f_eq15_impl(ki, spec.m, spec.a, spec.b, spec.p, opts.series);
      if (acceptable(c)) return {c.value, Method::Eq15, c.err};
    } else if (m_int) {
      const Closed c = f_thm3_impl(spec.k, mi, spec.a, spec.b, spec.p, opts.series);
      if (acceptable(c)) return {c.value, Method::Thm3, c.err};
    }
  } catch (const no_convergence&) {
  }
  return run_oracle(spec, opts);
}

EvalOutcome eval_integral(const IntegralSpec& spec, const EvalOptions& opts) {
  return spec.family == Family::G ? eval_g(spec, opts) : eval_f(spec, opts);
}

EvalOutcome eval_with_method(const IntegralSpec& spec, Method method,
                             const EvalOptions& opts) {
  spec.validate();
  opts.policy.validate();
  auto as_int = [&opts](double x, const char* what) {
    int out = 0;
    if (!near_int(x, opts.policy.tol, out))
      throw domain_error(std::string("forced method requires integer ") + what);
    return out;
  };
  auto want_family = [&spec](Family f, const char* name) {
    if (spec.family != f)
      throw domain_error(std::string(name) + ": wrong family for this formula");
  };
  switch (method) {
    case Method::Thm1: {
      want_family(Family::G, "Thm1");
      const Closed c =
          g_thm1_impl(spec.k, as_int(spec.m, "m"), spec.a, spec.b, spec.p, opts.series);
      return {c.value, Method::Thm1, c.err};
    }
    case Method::Thm2: {
      want_family(Family::G, "Thm2");
      const Closed c =
          g_thm2_impl(as_int(spec.k, "k"), spec.m, spec.a, spec.b, spec.p, opts.series);
      return {c.value, Method::Thm2, c.err};
    }
    case Method::Eq15: {
      want_family(Family::F, "Eq15");
      const Closed c =
          f_eq15_impl(as_int(spec.k, "k"), spec.m, spec.a, spec.b, spec.p, opts.series);
      return {c.value, Method::Eq15, c.err};
    }
    case Method::Thm3: {
      want_family(Family::F, "Thm3");
      const Closed c =
          f_thm3_impl(spec.k, as_int(spec.m, "m"), spec.a, spec.b, spec.p, opts.series);
      return {c.value, Method::Thm3, c.err};
    }
    case Method::Oracle:
      return run_oracle(spec, opts);
    default:
      throw domain_error("eval_with_method: only Thm1, Thm2, Eq15, Thm3 and Oracle "
                         "can be forced");
  }
}

}  // namespace marq
