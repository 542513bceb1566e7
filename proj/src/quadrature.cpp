#include "marq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "marq/detail/kahan.hpp"
#include "marq/marcum.hpp"
#include "marq/specfun.hpp"

namespace marq::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod / 7-point Gauss nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  int seg;  // which integrand this panel belongs to
  double lo, hi;
  double value;
  double err;
};

// One G7K15 evaluation with the QUADPACK error estimate.
Panel gk15(const std::function<double(double)>& f, int seg, double lo, double hi,
           long& evaluations) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  double fv1[7], fv2[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    fv1[i] = f(c - dx);
    fv2[i] = f(c + dx);
    const double fsum = fv1[i] + fv2[i];
    resk += kWgk[i] * fsum;
    resabs += kWgk[i] * (std::abs(fv1[i]) + std::abs(fv2[i]));
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  evaluations += 15;
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv1[i] - reskh) + std::abs(fv2[i] - reskh));
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > 1e-290) err = std::max(err, 50.0 * kEps * resabs);
  return {seg, lo, hi, resk * h, err};
}

struct Segment {
  std::function<double(double)> f;
  double lo, hi;
};

QuadratureResult integrate_segments(const std::vector<Segment>& segs, double abs_tol,
                                    const QuadratureControl& ctrl) {
  std::vector<Panel> panels;
  long evaluations = 0;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    panels.push_back(gk15(segs[s].f, s, segs[s].lo, segs[s].hi, evaluations));

  auto total_of = [&panels]() {
    // summed in a position-fixed order so results are run-to-run stable
    std::vector<const Panel*> order;
    order.reserve(panels.size());
    for (const Panel& p : panels) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const Panel* a, const Panel* b) {
      if (a->seg != b->seg) return a->seg < b->seg;
      return a->lo < b->lo;
    });
    detail::Kahan v, e;
    for (const Panel* p : order) {
      v.add(p->value);
      e.add(p->err);
    }
    return std::pair<double, double>(v.sum, e.sum);
  };

  for (;;) {
    auto [total, total_err] = total_of();
    const double eff_tol = std::max(abs_tol, ctrl.rel_floor * std::abs(total));
    const double per_panel = eff_tol / static_cast<double>(panels.size());
    // worst panel; ties broken by segment then left endpoint
    int worst = 0;
    for (int i = 1; i < static_cast<int>(panels.size()); ++i) {
      const Panel& p = panels[i];
      const Panel& w = panels[worst];
      if (p.err > w.err ||
          (p.err == w.err && (p.seg < w.seg || (p.seg == w.seg && p.lo < w.lo))))
        worst = i;
    }
    if (panels[worst].err < per_panel) {
      QuadratureResult r;
      r.value = total;
      r.abs_err_estimate = total_err;
      r.evaluations = evaluations;
      return r;
    }
    if (static_cast<int>(panels.size()) >= ctrl.max_panels)
      throw quadrature_error("integrate: panel budget exhausted above tolerance");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi))
      throw quadrature_error("integrate: interval too small to bisect");
    panels[worst] = gk15(segs[p.seg].f, p.seg, p.lo, mid, evaluations);
    panels.push_back(gk15(segs[p.seg].f, p.seg, mid, p.hi, evaluations));
  }
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                    double hi, double abs_tol, const QuadratureControl& ctrl) {
  if (!(hi > lo)) throw domain_error("integrate_adaptive: requires hi > lo");
  if (!(abs_tol > 0.0)) throw domain_error("integrate_adaptive: requires abs_tol > 0");
  QuadratureResult r = integrate_segments({{f, lo, hi}}, abs_tol, ctrl);
  r.truncation_point = hi;
  return r;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double power_k, double decay_p, double abs_tol,
                                         const QuadratureControl& ctrl) {
  if (!(power_k > 0.0)) throw domain_error("integrate_semi_infinite: requires k > 0");
  if (!(decay_p > 0.0)) throw domain_error("integrate_semi_infinite: requires p > 0");
  if (!(abs_tol > 0.0)) throw domain_error("integrate_semi_infinite: requires abs_tol > 0");

  // Truncation point from the analytic tail bound Gamma(k, pX)/p^k < tol/10.
  const double lq =
      std::log(0.1 * abs_tol) + power_k * std::log(decay_p) - sf::ln_gamma(power_k);
  const double q = std::clamp(std::exp(lq), 1e-300, 0.5);
  const double X = sf::inv_reg_upper_gamma(power_k, q) / decay_p;

  std::vector<Segment> segs;
  if (power_k < 1.0) {
    const double x1 = std::min(1.0, X);
    segs.push_back({[&f](double t) { return 2.0 * t * f(t * t); }, 0.0, std::sqrt(x1)});
    if (X > x1) segs.push_back({f, x1, X});
  } else {
    segs.push_back({f, 0.0, X});
  }
  QuadratureResult r = integrate_segments(segs, abs_tol, ctrl);
  const double tail_bound =
      std::exp(sf::ln_gamma(power_k) - power_k * std::log(decay_p)) *
      sf::reg_upper(power_k, decay_p * X);
  r.abs_err_estimate += tail_bound;
  r.truncation_point = X;
  return r;
}

QuadratureResult oracle_g(const IntegralSpec& spec, double tol, const QuadratureControl& ctrl) {
  spec.validate();
  if (spec.family != Family::G) throw domain_error("oracle_g: spec.family must be G");
  auto f = [&spec](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, spec.k - 1.0) * marcum_q(spec.m, spec.a, spec.b * std::sqrt(x)) *
           std::exp(-spec.p * x);
  };
  return integrate_semi_infinite(f, spec.k, spec.p, tol, ctrl);
}

QuadratureResult oracle_f(const IntegralSpec& spec, double tol, const QuadratureControl& ctrl) {
  spec.validate();
  if (spec.family != Family::F) throw domain_error("oracle_f: spec.family must be F");
  auto f = [&spec](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, spec.k - 1.0) * marcum_q(spec.m, spec.a * std::sqrt(x), spec.b) *
           std::exp(-spec.p * x);
  };
  return integrate_semi_infinite(f, spec.k, spec.p, tol, ctrl);
}

}  // namespace marq::quad
