#include "bvquad/rules.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bvquad/error.hpp"
#include "bvquad/tridiagonal.hpp"

namespace bvquad {
namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kProbeTolerance = 1e-10;
constexpr double kMergeTolerance = 1e-14;

bool must_be_positive(RuleFamily family) {
  switch (family) {
    case RuleFamily::gauss:
    case RuleFamily::radau_left:
    case RuleFamily::radau_right:
    case RuleFamily::clenshaw_curtis:
    case RuleFamily::kronrod:
      return true;
    default:
      return false;
  }
}

// Index of the first Chebyshev probe that fails, or max_probe + 1.
int first_failing_probe(std::span<const double> nodes, std::span<const double> weights,
                        const WeightSpec& weight, int max_probe) {
  if (max_probe < 0) return 0;
  std::vector<double> sums(max_probe + 1);
  simd::chebyshev_sums(nodes, weights, sums);
  const std::vector<double> exact = chebyshev_moments(weight, max_probe + 1);
  for (int k = 0; k <= max_probe; ++k) {
    if (!(std::abs(sums[k] - exact[k]) <= kProbeTolerance * (1.0 + std::abs(exact[k])))) {
      return k;
    }
  }
  return max_probe + 1;
}

// Reflect-average a rule for a symmetric weight so that nodes and weights are
// exactly mirrored.
void symmetrize(std::vector<double>& x, std::vector<double>& a) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double xs = 0.5 * (x[j] - x[i]);
    const double as = 0.5 * (a[i] + a[j]);
    x[i] = -xs;
    x[j] = xs;
    a[i] = as;
    a[j] = as;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

struct NodesWeights {
  std::vector<double> x;
  std::vector<double> a;
};

NodesWeights golub_welsch(std::vector<double> diag, const std::vector<double>& beta,
                          double mass) {
  const std::size_t n = diag.size();
  std::vector<double> off(n - 1);
  for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(beta[k]);
  const TridiagonalEigen eig = tridiagonal_eigen(std::move(diag), std::move(off));
  NodesWeights out;
  out.x = eig.values;
  out.a.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.a[j] = mass * eig.first_components[j] * eig.first_components[j];
  }
  return out;
}

}  // namespace

std::string_view to_string(RuleFamily family) noexcept {
  switch (family) {
    case RuleFamily::gauss: return "gauss";
    case RuleFamily::radau_left: return "radau_left";
    case RuleFamily::radau_right: return "radau_right";
    case RuleFamily::clenshaw_curtis: return "clenshaw_curtis";
    case RuleFamily::filippi: return "filippi";
    case RuleFamily::polya: return "polya";
    case RuleFamily::kronrod: return "kronrod";
    case RuleFamily::compound: return "compound";
    case RuleFamily::custom: return "custom";
  }
  return "unknown";
}

RuleFamily parse_family(std::string_view name) {
  if (name == "gauss") return RuleFamily::gauss;
  if (name == "radau_left" || name == "radau") return RuleFamily::radau_left;
  if (name == "radau_right") return RuleFamily::radau_right;
  if (name == "clenshaw_curtis" || name == "cc") return RuleFamily::clenshaw_curtis;
  if (name == "filippi") return RuleFamily::filippi;
  if (name == "polya") return RuleFamily::polya;
  if (name == "kronrod") return RuleFamily::kronrod;
  if (name == "compound") return RuleFamily::compound;
  if (name == "custom") return RuleFamily::custom;
  throw Error(ErrorKind::invalid_argument, "unknown rule family '" + std::string(name) + "'");
}

QuadratureRule::QuadratureRule(WeightSpec weight, std::vector<double> nodes,
                               std::vector<double> weights, RuleFamily family,
                               int declared_exactness)
    : QuadratureRule(weight, nodes, weights, std::vector<double>(nodes.size(), 0.0),
                     std::vector<double>(weights.size(), 0.0), family, declared_exactness) {}

QuadratureRule::QuadratureRule(WeightSpec weight, std::vector<double> nodes,
                               std::vector<double> weights, std::vector<double> nodes_lo,
                               std::vector<double> weights_lo, RuleFamily family,
                               int declared_exactness, std::optional<CompoundOrigin> origin)
    : weight_(weight),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      nodes_lo_(std::move(nodes_lo)),
      weights_lo_(std::move(weights_lo)),
      family_(family),
      declared_exactness_(declared_exactness),
      origin_(std::move(origin)) {
  const std::size_t n = nodes_.size();
  if (n == 0 || weights_.size() != n || nodes_lo_.size() != n || weights_lo_.size() != n) {
    throw Error(ErrorKind::invalid_rule, "nodes and weights must be non-empty and equally long");
  }
  if (declared_exactness_ < 0) {
    throw Error(ErrorKind::invalid_rule, "declared exactness must be >= 0");
  }
  double sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(nodes_[j]) || !std::isfinite(weights_[j])) {
      throw Error(ErrorKind::invalid_rule, "non-finite node or weight");
    }
    if (nodes_[j] < -1.0 || nodes_[j] > 1.0) {
      throw Error(ErrorKind::invalid_rule, "node outside [-1,1]");
    }
    if (j > 0 && !(nodes_[j] > nodes_[j - 1])) {
      throw Error(ErrorKind::invalid_rule, "nodes must be strictly increasing");
    }
    if (must_be_positive(family_) && weights_[j] < 0.0) {
      throw Error(ErrorKind::invalid_rule,
                  std::string(to_string(family_)) + " rule with a negative weight");
    }
    sum += weights_[j];
    abs_sum += std::abs(weights_[j]);
  }
  // Relative to sum |a_j|: clustered interpolatory nodes give large weights
  // of both signs whose sum cancels.
  if (std::abs(sum - weight_.mass()) > kMassTolerance * std::max(weight_.mass(), abs_sum)) {
    throw Error(ErrorKind::invalid_rule, "weights do not sum to the mass of the weight");
  }
}

bool QuadratureRule::is_positive() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double a) { return a >= 0.0; });
}

// Newton steps on the orthonormal p_n and Christoffel weights
// a = 1 / sum_{k<n} p_k(x)^2; the eigensolver leaves a few ulps behind.
void polish_gauss(const RecurrenceTable& rec, NodesWeights& nw) {
  const std::size_t n = nw.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double x = nw.x[i];
    for (int step = 0; step < 3; ++step) {
      double p_prev = 0.0;
      double p = 1.0 / std::sqrt(rec.beta[0]);
      double d_prev = 0.0;
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double sb = k > 0 ? std::sqrt(rec.beta[k]) : 0.0;
        const double sb_next = std::sqrt(rec.beta[k + 1]);
        const double p_next = ((x - rec.alpha[k]) * p - sb * p_prev) / sb_next;
        const double d_next = ((x - rec.alpha[k]) * d + p - sb * d_prev) / sb_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
      }
      const double dx = p / d;
      if (!std::isfinite(dx) || std::abs(dx) > 1e-8) break;
      x -= dx;
      if (std::abs(dx) <= 1e-17 * std::max(1.0, std::abs(x))) break;
    }
    if (std::abs(x - nw.x[i]) <= 1e-8 && x > -1.0 && x < 1.0) {
      nw.x[i] = x;
      double sum = 0.0;
      double p_prev = 0.0;
      double p = 1.0 / std::sqrt(rec.beta[0]);
      for (std::size_t k = 0; k < n; ++k) {
        sum += p * p;
        const double sb = k > 0 ? std::sqrt(rec.beta[k]) : 0.0;
        const double p_next = ((x - rec.alpha[k]) * p - sb * p_prev) / std::sqrt(rec.beta[k + 1]);
        p_prev = p;
        p = p_next;
      }
      nw.a[i] = 1.0 / sum;
    }
  }
}

QuadratureRule gauss_rule(const WeightSpec& weight, int n) {
  if (n < 1) throw Error(ErrorKind::size_error, "gauss_rule needs n >= 1");
  const RecurrenceTable rec = recurrence(weight, n + 1);
  NodesWeights nw = golub_welsch({rec.alpha.begin(), rec.alpha.end() - 1},
                                 {rec.beta.begin(), rec.beta.end() - 1}, rec.beta[0]);
  polish_gauss(rec, nw);
  symmetrize(nw.x, nw.a);
  return {weight, std::move(nw.x), std::move(nw.a), RuleFamily::gauss, 2 * n - 1};
}

QuadratureRule radau_rule(const WeightSpec& weight, int n, FixedEnd fixed_end) {
  if (n < 2) throw Error(ErrorKind::size_error, "radau_rule needs n >= 2");
  const RecurrenceTable rec = recurrence(weight, n);
  const double end = fixed_end == FixedEnd::left ? -1.0 : 1.0;

  // q_k = p_k(end) / p_{k-1}(end); the last diagonal entry is replaced so that
  // `end` becomes an eigenvalue of the modified Jacobi matrix.
  double q = end - rec.alpha[0];
  for (int k = 1; k < n - 1; ++k) q = (end - rec.alpha[k]) - rec.beta[k] / q;
  std::vector<double> diag = rec.alpha;
  diag[n - 1] = end - rec.beta[n - 1] / q;

  NodesWeights nw = golub_welsch(std::move(diag), rec.beta, rec.beta[0]);
  // The fixed node is exact by construction; remove the eigensolver's rounding.
  if (fixed_end == FixedEnd::left) {
    nw.x.front() = -1.0;
  } else {
    nw.x.back() = 1.0;
  }
  const RuleFamily family =
      fixed_end == FixedEnd::left ? RuleFamily::radau_left : RuleFamily::radau_right;
  return {weight, std::move(nw.x), std::move(nw.a), family, 2 * n - 2};
}

std::vector<double> node_family(NodeFamily family, int n) {
  const int min_n = family == NodeFamily::clenshaw_curtis ? 2 : 1;
  if (n < min_n) {
    throw Error(ErrorKind::size_error, "node family needs n >= " + std::to_string(min_n));
  }
  // sin form: exact zero at the centre and exact mirror symmetry.
  std::vector<double> x(n);
  const double pi = std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    const double m = 2.0 * i - (n - 1);
    switch (family) {
      case NodeFamily::clenshaw_curtis:
        x[i] = std::sin(pi * m / (2.0 * (n - 1)));
        break;
      case NodeFamily::filippi:
        x[i] = std::sin(pi * m / (2.0 * (n + 1)));
        break;
      case NodeFamily::polya:
        x[i] = std::sin(pi * m / (2.0 * n));
        break;
    }
  }
  return x;
}

QuadratureRule interpolatory_rule(const WeightSpec& weight, std::vector<double> nodes,
                                  RuleFamily family) {
  const int n = static_cast<int>(nodes.size());
  if (n < 1) throw Error(ErrorKind::size_error, "interpolatory_rule needs at least one node");
  std::sort(nodes.begin(), nodes.end());
  for (int j = 0; j < n; ++j) {
    if (!(nodes[j] >= -1.0 && nodes[j] <= 1.0)) {
      throw Error(ErrorKind::domain_error, "interpolatory nodes must lie in [-1,1]");
    }
    if (j > 0 && nodes[j] == nodes[j - 1]) {
      throw Error(ErrorKind::ill_conditioned, "coincident interpolation nodes");
    }
  }

  // T_k(x_j) in double-double, so that the refinement step below sees the
  // residual of the double solution instead of rounding noise.
  std::vector<DoubleDouble> v_dd(static_cast<std::size_t>(n) * n);
  Eigen::MatrixXd v(n, n);
  for (int j = 0; j < n; ++j) {
    DoubleDouble prev{1.0};
    DoubleDouble cur{nodes[j]};
    v_dd[j] = prev;
    if (n > 1) v_dd[static_cast<std::size_t>(n) + j] = cur;
    for (int k = 2; k < n; ++k) {
      const DoubleDouble next = dd::sub(dd::mul(cur, 2.0 * nodes[j]), prev);
      prev = cur;
      cur = next;
      v_dd[static_cast<std::size_t>(k) * n + j] = cur;
    }
    for (int k = 0; k < n; ++k) v(k, j) = v_dd[static_cast<std::size_t>(k) * n + j].hi;
  }
  const std::vector<double> mu = chebyshev_moments(weight, n);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(mu.data(), n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu = v.partialPivLu();
  Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd residual(n);
  for (int k = 0; k < n; ++k) {
    DoubleDouble r{mu[k]};
    for (int j = 0; j < n; ++j) {
      r = dd::sub(r, dd::mul(v_dd[static_cast<std::size_t>(k) * n + j], sol[j]));
    }
    residual[k] = r.to_double();
  }
  sol += lu.solve(residual);

  std::vector<double> weights(sol.data(), sol.data() + n);
  if (!std::all_of(weights.begin(), weights.end(), [](double a) { return std::isfinite(a); }) ||
      first_failing_probe(nodes, weights, weight, n - 1) <= n - 1) {
    throw Error(ErrorKind::ill_conditioned,
                "interpolatory weights fail the exactness check to degree " +
                    std::to_string(n - 1));
  }
  return {weight, std::move(nodes), std::move(weights), family, n - 1};
}

QuadratureRule chebyshev_family_rule(NodeFamily family, int n, const WeightSpec& weight) {
  if (!weight.is_unit()) {
    throw Error(ErrorKind::unsupported_weight,
                "Clenshaw-Curtis, Filippi and Polya rules are built for the legendre weight only");
  }
  RuleFamily label = RuleFamily::clenshaw_curtis;
  if (family == NodeFamily::filippi) label = RuleFamily::filippi;
  if (family == NodeFamily::polya) label = RuleFamily::polya;
  return interpolatory_rule(weight, node_family(family, n), label);
}

QuadratureRule compound_rule(const QuadratureRule& elementary, int n) {
  if (!elementary.weight().is_unit()) {
    throw Error(ErrorKind::weight_mismatch, "compound rules need a legendre elementary rule");
  }
  if (n < 1) throw Error(ErrorKind::size_error, "compound_rule needs n >= 1");

  const std::size_t l = elementary.size();
  std::vector<double> x_hi, x_lo, a_hi, a_lo;
  x_hi.reserve(n * l);
  x_lo.reserve(n * l);
  a_hi.reserve(n * l);
  a_lo.reserve(n * l);
  for (int nu = 1; nu <= n; ++nu) {
    for (std::size_t j = 0; j < l; ++j) {
      // -1 + (x_j + 2 nu - 1) / n and a_j / n, in double-double
      DoubleDouble x{elementary.nodes()[j], elementary.nodes_lo()[j]};
      x = dd::add(dd::div(dd::add(x, 2.0 * nu - 1.0), n), -1.0);
      const DoubleDouble a =
          dd::div(DoubleDouble{elementary.weights()[j], elementary.weights_lo()[j]}, n);
      if (!x_hi.empty() && std::abs(x.hi - x_hi.back()) <= kMergeTolerance) {
        const DoubleDouble merged = dd::add(DoubleDouble{a_hi.back(), a_lo.back()}, a);
        a_hi.back() = merged.hi;
        a_lo.back() = merged.lo;
        continue;
      }
      x_hi.push_back(x.hi);
      x_lo.push_back(x.lo);
      a_hi.push_back(a.hi);
      a_lo.push_back(a.lo);
    }
  }
  CompoundOrigin origin{std::make_shared<const QuadratureRule>(elementary), n};
  return {elementary.weight(),
          std::move(x_hi),
          std::move(a_hi),
          std::move(x_lo),
          std::move(a_lo),
          RuleFamily::compound,
          elementary.declared_exactness(),
          std::move(origin)};
}

QuadratureRule elementary_rule(std::string_view name) {
  const WeightSpec unit = WeightSpec::legendre();
  if (name == "midpoint") return {unit, {0.0}, {2.0}, RuleFamily::custom, 1};
  if (name == "trapezoid") return {unit, {-1.0, 1.0}, {1.0, 1.0}, RuleFamily::custom, 1};
  // Simpson and 2-point Gauss carry double-double parts; a weight-sum defect of
  // one ulp would otherwise grow like n^{s+1} relative to the compound kernel.
  if (name == "simpson") {
    const DoubleDouble third = dd::div(DoubleDouble{1.0}, 3.0);
    const DoubleDouble four_thirds = dd::div(DoubleDouble{4.0}, 3.0);
    return {unit,
            {-1.0, 0.0, 1.0},
            {third.hi, four_thirds.hi, third.hi},
            {0.0, 0.0, 0.0},
            {third.lo, four_thirds.lo, third.lo},
            RuleFamily::custom,
            3};
  }
  if (name == "gauss2") {
    // x = 1/sqrt(3): one Newton step on x^2 = 1/3 in double-double.
    const double hi = 1.0 / std::sqrt(3.0);
    const DoubleDouble residual = dd::sub(dd::div(DoubleDouble{1.0}, 3.0), dd::two_prod(hi, hi));
    const DoubleDouble x = dd::quick_two_sum(hi, residual.hi / (2.0 * hi));
    return {unit, {-x.hi, x.hi}, {1.0, 1.0}, {-x.lo, x.lo}, {0.0, 0.0}, RuleFamily::custom, 3};
  }
  throw Error(ErrorKind::invalid_argument, "unknown elementary rule '" + std::string(name) + "'");
}

QuadratureRule make_family_rule(RuleFamily family, const WeightSpec& weight, int n) {
  switch (family) {
    case RuleFamily::gauss: return gauss_rule(weight, n);
    case RuleFamily::radau_left: return radau_rule(weight, n, FixedEnd::left);
    case RuleFamily::radau_right: return radau_rule(weight, n, FixedEnd::right);
    case RuleFamily::clenshaw_curtis:
      return chebyshev_family_rule(NodeFamily::clenshaw_curtis, n, weight);
    case RuleFamily::filippi: return chebyshev_family_rule(NodeFamily::filippi, n, weight);
    case RuleFamily::polya: return chebyshev_family_rule(NodeFamily::polya, n, weight);
    case RuleFamily::kronrod: return kronrod_rule(weight, n);
    case RuleFamily::compound:
    case RuleFamily::custom:
      break;
  }
  throw Error(ErrorKind::invalid_argument,
              std::string(to_string(family)) + " rules cannot be built from a size alone");
}

double apply(const QuadratureRule& rule, const std::function<double(double)>& f) {
  std::vector<double> terms(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) terms[j] = rule.weights()[j] * f(rule.nodes()[j]);
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  double sum = 0.0;
  double comp = 0.0;
  for (double v : terms) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

int exactness_degree(const QuadratureRule& rule, int max_probe) {
  if (max_probe < 0) throw Error(ErrorKind::domain_error, "max_probe must be >= 0");
  return first_failing_probe(rule.nodes(), rule.weights(), rule.weight(), max_probe) - 1;
}

}  // namespace bvquad
