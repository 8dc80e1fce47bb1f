#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bvquad/orthopoly.hpp"

namespace bvquad {

/// An integral value and whether it came from a closed form or from the
/// reference integrator.
struct IntegralValue {
  double value = 0.0;
  bool oracle_computed = false;
};

/**
 * An integrand in V_s: f^(s-1) absolutely continuous, Var f^(s) finite.
 *
 * `s` is empty for the smooth control (no ceiling). `variation` is the exact
 * Var f^(s) over [-1,1], stored in closed form.
 */
class TestFunction {
 public:
  using Evaluator = std::function<double(double)>;
  using ClosedForm = std::function<double()>;

  TestFunction(std::string name, std::optional<int> s, std::optional<double> variation,
               Evaluator evaluator, ClosedForm unit_integral, std::string integral_formula,
               std::optional<double> singularity);

  const std::string& name() const { return name_; }
  std::optional<int> s() const { return s_; }
  std::optional<double> variation() const { return variation_; }
  std::optional<double> singularity() const { return singularity_; }
  const std::string& integral_formula() const { return integral_formula_; }

  double operator()(double x) const { return evaluator_(x); }
  const Evaluator& evaluator() const { return evaluator_; }

  /// I_w[f]: closed form for the unit weight, reference integrator (split at
  /// the singularity) otherwise.
  IntegralValue exact_integral(const WeightSpec& weight) const;

 private:
  std::string name_;
  std::optional<int> s_;
  std::optional<double> variation_;
  Evaluator evaluator_;
  ClosedForm unit_integral_;
  std::string integral_formula_;
  std::optional<double> singularity_;
};

/// f(x) = (x - c)_+^s / s!, with f(c) = 0 for s = 0. Var f^(s) = 1.
TestFunction trunc_power(double c, int s);

/// f(x) = |x - c|^k for odd k. Var f^(k) = 2 k!.
TestFunction abs_power(double c, int k);

/// f(x) = exp(x), no V_s ceiling.
TestFunction smooth_control();

/// Parses "truncpower:c:s", "abspower:c:k" or "exp".
TestFunction parse_function(const std::string& descriptor);

/// Singularity location used by the convergence studies.
inline constexpr double default_singularity = 0.3;

/// trunc_power(0.3, 0..3), abs_power(0.3, 1), abs_power(0.3, 3), abs_power(0, 3).
std::vector<TestFunction> standard_corpus();

}  // namespace bvquad
