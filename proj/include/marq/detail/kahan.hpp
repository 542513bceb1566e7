#pragma once

namespace marq::detail {

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;

  void add(double term) {
    double y = term - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace marq::detail
