#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvquad {

enum class ErrorKind {
  unsupported_weight,
  domain_error,
  size_error,
  eigen_failure,
  ill_conditioned,
  unsupported_lambda,
  extension_failure,
  weight_mismatch,
  invalid_rule,
  precondition_violation,
  bound_violation,
  scaling_violation,
  insufficient_data,
  all_noise,
  invalid_argument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library; `kind()` names the failure the
/// way the CLI reports it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when |I_w[f] - Q[f]| exceeds sup|K_s| Var f^(s), or the kernel bound
/// exceeds Freud's constant. Carries all three numbers.
class BoundViolation : public Error {
 public:
  BoundViolation(double actual_error, double kernel_bound, double freud_bound,
                 const std::string& what)
      : Error(ErrorKind::bound_violation, what),
        actual_error(actual_error),
        kernel_bound(kernel_bound),
        freud_bound(freud_bound) {}

  double actual_error;
  double kernel_bound;
  double freud_bound;  // NaN when the rule admits no Freud bound
};

class ScalingViolation : public Error {
 public:
  ScalingViolation(int n, double ratio, const std::string& what)
      : Error(ErrorKind::scaling_violation, what), n(n), ratio(ratio) {}

  int n;
  double ratio;  // sup(n) n^{s+1} / sup(1)
};

}  // namespace bvquad
