#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvquad/double_double.hpp"

namespace bvquad {

enum class WeightKind { legendre, ultraspherical, chebyshev1, chebyshev2 };

/**
 * A symmetric weight on [-1,1] from the ultraspherical family
 * w_lambda(x) = (1 - x^2)^(lambda - 1/2), lambda >= 0.
 *
 * Legendre (lambda = 1/2) and the two Chebyshev weights (lambda = 0 and 1)
 * are kept as named kinds so that closed forms can be used for them.
 */
class WeightSpec {
 public:
  static WeightSpec legendre();
  static WeightSpec chebyshev1();
  static WeightSpec chebyshev2();
  /// Throws ErrorKind::domain_error for lambda < 0 or non-finite lambda.
  static WeightSpec ultraspherical(double lambda);

  WeightKind kind() const { return kind_; }
  /// Effective ultraspherical parameter (1/2 for legendre, 0 and 1 for the
  /// Chebyshev kinds).
  double lambda() const { return lambda_; }
  double mass() const { return mass_; }
  /// Smallest M with w(x) <= M (1-x^2)^{-1/2}; present for every lambda >= 0.
  std::optional<double> freud_M() const { return freud_M_; }

  /// w == 1 on [-1,1]; true for legendre and ultraspherical(0.5).
  bool is_unit() const { return lambda_ == 0.5; }

  double operator()(double x) const;

  /// Short descriptor, also accepted by parse_weight: "legendre",
  /// "chebyshev1", "chebyshev2" or "ultraspherical:<lambda>".
  std::string descriptor() const;

  friend bool operator==(const WeightSpec& a, const WeightSpec& b) {
    return a.kind_ == b.kind_ && a.lambda_ == b.lambda_;
  }

 private:
  WeightSpec(WeightKind kind, double lambda);

  WeightKind kind_;
  double lambda_;
  double mass_;
  std::optional<double> freud_M_;
};

/// Parses the strings produced by WeightSpec::descriptor().
WeightSpec parse_weight(const std::string& text);

/// Monic three-term recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1},
/// with beta[0] = mass.
struct RecurrenceTable {
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// First n recurrence coefficients in closed form.
RecurrenceTable recurrence(const WeightSpec& weight, int n);

/// I_w[x^k].
double moment(const WeightSpec& weight, int k);

/// I_w[T_k], T_k the Chebyshev polynomial of the first kind.
double chebyshev_moment(const WeightSpec& weight, int k);

/// First `count` Chebyshev moments I_w[T_0..T_{count-1}].
std::vector<double> chebyshev_moments(const WeightSpec& weight, int count);

/// \int_t^1 w(x) (x - t)^s dx. Closed form for the unit weight, the reference
/// integrator otherwise.
double truncated_moment(const WeightSpec& weight, int s, double t);

/// Same quantity in double-double; only the unit weight gets more than double
/// accuracy.
DoubleDouble truncated_moment_dd(const WeightSpec& weight, int s, double t);

}  // namespace bvquad
