#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bvquad/corpus.hpp"
#include "bvquad/rules.hpp"

namespace bvquad {

/**
 * Peano kernel of the error functional R = I_w - Q of a rule exact on P_s:
 *
 *   K_s(t) = (1/s!) [ \int_t^1 w(x) (x-t)^s dx - sum_{x_j > t} a_j (x_j - t)^s ],
 *
 * so that R[f] = \int K_s(t) df^(s)(t) and |R[f]| <= sup|K_s| Var f^(s).
 * At a node, (0)_+^0 is taken as 0 (only nodes strictly above t count).
 *
 * Between consecutive nodes the set of counted nodes is fixed; `piece`
 * evaluates that smooth branch, which also gives exact one-sided limits at
 * the nodes. Sums run in double-double.
 */
class PeanoKernel {
 public:
  /// Throws precondition_violation if the rule is not exact on P_s.
  PeanoKernel(const QuadratureRule& rule, int s);

  int order() const { return s_; }
  const QuadratureRule& rule() const { return rule_; }

  /// K_s(t); throws domain_error outside [-1,1].
  double operator()(double t) const;

  /// The branch of K_s that counts nodes with index >= first.
  double piece(std::size_t first, double t) const;

 private:
  QuadratureRule rule_;
  int s_;
  double inv_factorial_;
};

struct PeanoProfile {
  RuleFamily family = RuleFamily::custom;
  std::size_t n = 0;  // node count
  int s = 0;
  double sup_norm = 0.0;
  double argmax_t = 0.0;
  std::optional<double> freud_bound;

  /// sup_norm / freud_bound, NaN without a Freud bound.
  double ratio() const;
};

/// K_s(t) with the exactness precondition checked on every call.
double kernel_value(const QuadratureRule& rule, int s, double t);

/// sup_t |K_s(t)|: 64 Chebyshev-spaced samples per inter-node piece, then
/// golden-section refinement to |dt| <= 1e-12 around the best sample of every
/// piece that comes within a factor 2 of the largest sample.
PeanoProfile kernel_sup_norm(const QuadratureRule& rule, int s);

/// 5 M ((s+2) pi)^{s+1} / s! * n^{-(s+1)}.
double freud_bound(double M, int s, std::size_t n);

/// Freud's bound for this rule if it is positive, interpolatory (exact on
/// P_{n-1}) and its weight has a finite majorant constant.
std::optional<double> rule_freud_bound(const QuadratureRule& rule, int s);

struct BoundCheck {
  double actual_error = 0.0;
  double kernel_bound = 0.0;
  std::optional<double> freud_bound;
};

/// |I_w[f] - Q[f]| <= sup|K_s| Var f^(s) <= Freud Var f^(s), with relative
/// slack 1e-10 on the first and 1e-12 on the second inequality plus the
/// floating-point error of evaluating Q[f]. Throws BoundViolation.
BoundCheck error_bound_check(const QuadratureRule& rule, const TestFunction& f);
/// Same, with a profile computed earlier for (rule, f.s()).
BoundCheck error_bound_check(const QuadratureRule& rule, const TestFunction& f,
                             const PeanoProfile& profile);

struct ScalingSample {
  int n = 0;
  double sup_norm = 0.0;
  double scaled = 0.0;  // sup_norm * n^{s+1}
};

inline constexpr double scaling_tolerance = 1e-9;

/// sup|K_s(Q^(n))| for each n, asserting sup(n) n^{s+1} = sup|K_s(Q)| to
/// 1e-9 relative. Throws ScalingViolation.
std::vector<ScalingSample> compound_kernel_scaling(const QuadratureRule& elementary, int s,
                                                   std::span<const int> n_list);

}  // namespace bvquad
