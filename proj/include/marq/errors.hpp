#pragma once

#include <stdexcept>
#include <string>

namespace marq {

/// Argument outside a function's documented domain.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series exceeded its term budget before meeting the stopping rule.
class no_convergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature exhausted its panel budget above tolerance.
class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula produced a value outside its physical range.
/// Carries the offending value so callers can report it.
class nonphysical_error : public std::runtime_error {
 public:
  nonphysical_error(const std::string& msg, double offending)
      : std::runtime_error(msg), offending_(offending) {}
  double offending_value() const noexcept { return offending_; }

 private:
  double offending_;
};

}  // namespace marq
