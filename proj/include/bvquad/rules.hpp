#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bvquad/orthopoly.hpp"
#include "bvquad/simd/kernels.hpp"

namespace bvquad {

enum class RuleFamily {
  gauss,
  radau_left,
  radau_right,
  clenshaw_curtis,
  filippi,
  polya,
  kronrod,
  compound,
  custom,
};

std::string_view to_string(RuleFamily family) noexcept;
/// Accepts the names from to_string plus the aliases "cc" and "radau" (left).
RuleFamily parse_family(std::string_view name);

enum class NodeFamily { clenshaw_curtis, filippi, polya };
enum class FixedEnd { left, right };

class QuadratureRule;

/// Provenance of a compound rule: `copies` affine copies of `elementary`.
struct CompoundOrigin {
  std::shared_ptr<const QuadratureRule> elementary;
  int copies = 1;
};

/**
 * Q[f] = sum_j a_j f(x_j) for a weight w on [-1,1].
 *
 * Nodes are strictly increasing in [-1,1] and the weights reproduce the mass
 * of w to 1e-12 relative. Gauss, Radau, Clenshaw-Curtis and Kronrod rules must
 * have non-negative weights. Nodes and weights may carry double-double low
 * parts; they are zero except for compound rules, whose transplanted nodes
 * are formed in double-double so that Peano kernels can be evaluated past
 * double precision.
 *
 * For compound rules `declared_exactness` is the degree m of the elementary
 * rule, which governs the n^{-s-1} rate, not the global degree.
 */
class QuadratureRule {
 public:
  /// Validates the invariants; throws ErrorKind::invalid_rule.
  QuadratureRule(WeightSpec weight, std::vector<double> nodes, std::vector<double> weights,
                 RuleFamily family, int declared_exactness);
  QuadratureRule(WeightSpec weight, std::vector<double> nodes, std::vector<double> weights,
                 std::vector<double> nodes_lo, std::vector<double> weights_lo, RuleFamily family,
                 int declared_exactness, std::optional<CompoundOrigin> origin = std::nullopt);

  const WeightSpec& weight() const { return weight_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> nodes_lo() const { return nodes_lo_; }
  std::span<const double> weights_lo() const { return weights_lo_; }
  RuleFamily family() const { return family_; }
  int declared_exactness() const { return declared_exactness_; }
  std::size_t size() const { return nodes_.size(); }
  const std::optional<CompoundOrigin>& compound_origin() const { return origin_; }

  /// All a_j >= 0.
  bool is_positive() const;

  simd::NodeData node_data() const { return {nodes_, nodes_lo_, weights_, weights_lo_}; }

 private:
  WeightSpec weight_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> nodes_lo_;
  std::vector<double> weights_lo_;
  RuleFamily family_;
  int declared_exactness_;
  std::optional<CompoundOrigin> origin_;
};

/// n-point Gauss rule from the Jacobi matrix (Golub-Welsch).
QuadratureRule gauss_rule(const WeightSpec& weight, int n);

/// n-point Radau rule with one node fixed at -1 (left) or +1 (right).
QuadratureRule radau_rule(const WeightSpec& weight, int n, FixedEnd fixed_end);

/// Ascending node sets: Chebyshev extrema (clenshaw_curtis, n >= 2), interior
/// second-kind Chebyshev points (filippi) and first-kind zeros (polya).
std::vector<double> node_family(NodeFamily family, int n);

/// Weights from the Chebyshev-basis moment system; exact on P_{n-1}.
QuadratureRule interpolatory_rule(const WeightSpec& weight, std::vector<double> nodes,
                                  RuleFamily family = RuleFamily::custom);

/// Clenshaw-Curtis, Filippi or Polya rule for the unit weight.
QuadratureRule chebyshev_family_rule(NodeFamily family, int n,
                                     const WeightSpec& weight = WeightSpec::legendre());

/// (2n+1)-point Gauss-Kronrod extension of the n-point Gauss rule for
/// ultraspherical weights with lambda in [0,1] or lambda = 3.
QuadratureRule kronrod_rule(const WeightSpec& weight, int n);

/// The displayed compound formula: n affine copies of `elementary` on the
/// subintervals of length 2/n, junction nodes merged.
QuadratureRule compound_rule(const QuadratureRule& elementary, int n);

/// Elementary rules by name: midpoint, trapezoid, simpson, gauss2.
QuadratureRule elementary_rule(std::string_view name);

/// Generic constructor used by the runner and the CLI. For compound rules use
/// compound_rule.
QuadratureRule make_family_rule(RuleFamily family, const WeightSpec& weight, int n);

/// sum_j a_j f(x_j), summed in ascending magnitude with compensation.
double apply(const QuadratureRule& rule, const std::function<double(double)>& f);

/// Largest d <= max_probe with |Q[T_k] - I_w[T_k]| <= 1e-10 (1 + |I_w[T_k]|)
/// for every k <= d (T_k Chebyshev polynomials, which span the same spaces as
/// the monomials); -1 if constants already fail.
int exactness_degree(const QuadratureRule& rule, int max_probe);

}  // namespace bvquad
