#pragma once

#include <string>

#include "marq/errors.hpp"

namespace marq {

/// The two integral families:
///   G(k,m,a,b,p) = int_0^inf x^{k-1} Q_m(a, b sqrt(x)) e^{-p x} dx
///   F(k,m,a,b,p) = int_0^inf x^{k-1} Q_m(a sqrt(x), b) e^{-p x} dx
enum class Family { G, F };

/// Parameter 5-tuple of either family.
struct IntegralSpec {
  Family family;
  double k;  // power, > 0
  double m;  // Marcum order, >= 0.5
  double a;  // >= 0
  double b;  // >= 0
  double p;  // exponential rate, > 0

  void validate() const;
};

/// Which evaluation path produced a value.
enum class Method { Thm1, Thm2, Eq15, Thm3, Lemma1, Lemma2_G, Lemma2_F, Lemma3, Oracle };

const char* to_string(Method m);

struct EvalOutcome {
  double value = 0.0;
  Method method = Method::Oracle;
  double err_estimate = 0.0;
};

/// Classification rule for "is this floating parameter an integer".
/// 1e-9 sits far above double rounding noise and far below any meaningful
/// parameter spacing.
struct IntegralityPolicy {
  double tol = 1e-9;

  void validate() const;
};

}  // namespace marq
