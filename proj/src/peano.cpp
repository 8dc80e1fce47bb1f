#include "bvquad/peano.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bvquad/error.hpp"

namespace bvquad {
namespace {

constexpr int kSamplesPerPiece = 64;
constexpr double kGoldenTolerance = 1e-12;
constexpr double kRefineFraction = 0.5;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void require_exact(const QuadratureRule& rule, int s) {
  if (s < 0) throw Error(ErrorKind::domain_error, "kernel order must be >= 0");
  if (exactness_degree(rule, s) < s) {
    throw Error(ErrorKind::precondition_violation,
                "rule is not exact on P_" + std::to_string(s) +
                    "; the Peano kernel representation does not apply");
  }
}

struct Candidate {
  double value = -1.0;
  double t = 0.0;
};

// Golden-section search for the maximum of g on [a, b].
Candidate golden_max(const std::function<double(double)>& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > kGoldenTolerance) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return gc >= gd ? Candidate{gc, c} : Candidate{gd, d};
}

// sum_{j >= first} a_j (x_j - t)^s on every piece as a polynomial in
// u = t - hi, where hi is the piece's right end. Built right to left: the
// moments sum a_j (x_j - c)^m of the counted nodes are re-centred from one
// piece end to the next and the newly counted nodes are added, all in
// double-double. O(N s^2) in total instead of O(N) per evaluation.
class PiecewiseNodeSum {
 public:
  PiecewiseNodeSum(const QuadratureRule& rule, int s, const std::vector<double>& his,
                   const std::vector<std::size_t>& firsts)
      : s_(s), his_(his), coef_(his.size() * (s + 1)) {
    const auto xh = rule.nodes();
    const auto xl = rule.nodes_lo();
    const auto ah = rule.weights();
    const auto al = rule.weights_lo();
    std::vector<double> binom((s + 1) * (s + 1), 0.0);
    for (int m = 0; m <= s; ++m) {
      binom[m * (s + 1)] = 1.0;
      for (int k = 1; k <= m; ++k) {
        binom[m * (s + 1) + k] = binom[(m - 1) * (s + 1) + k - 1] + binom[(m - 1) * (s + 1) + k];
      }
    }
    std::vector<DoubleDouble> moments(s + 1, DoubleDouble{0.0});
    std::vector<DoubleDouble> shifted(s + 1);
    std::size_t counted = xh.size();
    for (std::size_t i = his.size(); i-- > 0;) {
      const double c = his[i];
      if (i + 1 < his.size()) {
        const DoubleDouble d = dd::two_sum(his[i + 1], -c);
        for (int m = 0; m <= s; ++m) {
          DoubleDouble acc{0.0};
          DoubleDouble dp{1.0};
          for (int k = m; k >= 0; --k) {
            acc = dd::add(acc, dd::mul(dd::mul(moments[k], dp), binom[m * (s + 1) + k]));
            dp = dd::mul(dp, d);
          }
          shifted[m] = acc;
        }
        moments.swap(shifted);
      }
      for (std::size_t j = firsts[i]; j < counted; ++j) {
        const DoubleDouble y = dd::add(dd::two_sum(xh[j], -c), xl[j]);
        DoubleDouble p{ah[j], al[j]};
        for (int m = 0; m <= s; ++m) {
          moments[m] = dd::add(moments[m], p);
          p = dd::mul(p, y);
        }
      }
      counted = firsts[i];
      // (x - c - u)^s = sum_m C(s,m) (x - c)^m (-u)^{s-m}
      for (int m = 0; m <= s; ++m) {
        const double sign = (s - m) % 2 == 0 ? 1.0 : -1.0;
        coef_[i * (s + 1) + (s - m)] = dd::mul(moments[m], sign * binom[s * (s + 1) + m]);
      }
    }
  }

  DoubleDouble operator()(std::size_t piece, double t) const {
    const DoubleDouble u = dd::two_sum(t, -his_[piece]);
    const DoubleDouble* c = &coef_[piece * (s_ + 1)];
    DoubleDouble q = c[s_];
    for (int p = s_ - 1; p >= 0; --p) q = dd::add(dd::mul(q, u), c[p]);
    return q;
  }

 private:
  int s_;
  std::vector<double> his_;
  std::vector<DoubleDouble> coef_;
};

}  // namespace

PeanoKernel::PeanoKernel(const QuadratureRule& rule, int s)
    : rule_(rule), s_(s), inv_factorial_(1.0 / factorial(s)) {
  require_exact(rule_, s_);
}

double PeanoKernel::operator()(double t) const {
  if (!(t >= -1.0 && t <= 1.0)) {
    throw Error(ErrorKind::domain_error, "kernel argument must lie in [-1,1]");
  }
  const auto nodes = rule_.nodes();
  const auto first = static_cast<std::size_t>(
      std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
  return piece(first, t);
}

double PeanoKernel::piece(std::size_t first, double t) const {
  const DoubleDouble moment = truncated_moment_dd(rule_.weight(), s_, t);
  const DoubleDouble quad = simd::truncated_power_sum(rule_.node_data().tail(first), t, s_);
  return dd::sub(moment, quad).to_double() * inv_factorial_;
}

double PeanoProfile::ratio() const {
  if (!freud_bound) return std::numeric_limits<double>::quiet_NaN();
  return sup_norm / *freud_bound;
}

double kernel_value(const QuadratureRule& rule, int s, double t) {
  return PeanoKernel(rule, s)(t);
}

double freud_bound(double M, int s, std::size_t n) {
  if (!(M > 0.0) || s < 0 || n < 1) {
    throw Error(ErrorKind::domain_error, "freud_bound needs M > 0, s >= 0, n >= 1");
  }
  const double base = (s + 2) * std::numbers::pi;
  return 5.0 * M * std::pow(base, s + 1) / factorial(s) *
         std::pow(static_cast<double>(n), -(s + 1));
}

std::optional<double> rule_freud_bound(const QuadratureRule& rule, int s) {
  const auto M = rule.weight().freud_M();
  if (!M || !rule.is_positive()) return std::nullopt;
  const int needed = static_cast<int>(rule.size()) - 1;
  if (exactness_degree(rule, needed) < needed) return std::nullopt;
  return freud_bound(*M, s, rule.size());
}

PeanoProfile kernel_sup_norm(const QuadratureRule& rule, int s) {
  require_exact(rule, s);
  const auto nodes = rule.nodes();

  std::vector<double> breaks{-1.0};
  for (double x : nodes) {
    if (x > -1.0 && x < 1.0) breaks.push_back(x);
  }
  breaks.push_back(1.0);

  const std::size_t count = breaks.size() - 1;
  std::vector<double> his(breaks.begin() + 1, breaks.end());
  std::vector<std::size_t> firsts(count);
  for (std::size_t i = 0; i < count; ++i) {
    firsts[i] = static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), his[i]) - nodes.begin());
  }
  const PiecewiseNodeSum node_sum(rule, s, his, firsts);
  const double inv_factorial = 1.0 / factorial(s);
  auto value = [&](std::size_t i, double t) {
    const DoubleDouble moment = truncated_moment_dd(rule.weight(), s, t);
    return std::abs(dd::sub(moment, node_sum(i, t)).to_double() * inv_factorial);
  };

  struct PieceBest {
    double lo, hi;
    int k;
    Candidate best;
  };
  std::vector<PieceBest> pieces;
  pieces.reserve(count);
  double global = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    PieceBest pb{lo, hi, 0, {}};
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int k = 0; k < kSamplesPerPiece; ++k) {
      double t = mid - half * std::cos(std::numbers::pi * k / (kSamplesPerPiece - 1));
      if (k == 0) t = lo;
      if (k == kSamplesPerPiece - 1) t = hi;
      const double v = value(i, t);
      if (v > pb.best.value) {
        pb.best = {v, t};
        pb.k = k;
      }
    }
    global = std::max(global, pb.best.value);
    pieces.push_back(pb);
  }

  Candidate overall{-1.0, 0.0};
  for (std::size_t i = 0; i < count; ++i) {
    const PieceBest& pb = pieces[i];
    Candidate best = pb.best;
    if (best.value >= kRefineFraction * global && best.value > 0.0) {
      const double mid = 0.5 * (pb.lo + pb.hi);
      const double half = 0.5 * (pb.hi - pb.lo);
      auto sample = [&](int k) {
        if (k <= 0) return pb.lo;
        if (k >= kSamplesPerPiece - 1) return pb.hi;
        return mid - half * std::cos(std::numbers::pi * k / (kSamplesPerPiece - 1));
      };
      const Candidate refined = golden_max([&](double t) { return value(i, t); },
                                           sample(pb.k - 1), sample(pb.k + 1));
      if (refined.value > best.value) best = refined;
    }
    if (best.value > overall.value) overall = best;
  }

  PeanoProfile profile;
  profile.family = rule.family();
  profile.n = rule.size();
  profile.s = s;
  profile.sup_norm = std::max(overall.value, 0.0);
  profile.argmax_t = overall.t;
  profile.freud_bound = rule_freud_bound(rule, s);
  return profile;
}

BoundCheck error_bound_check(const QuadratureRule& rule, const TestFunction& f) {
  if (!f.s()) {
    throw Error(ErrorKind::precondition_violation,
                f.name() + " has no finite smoothness order; no Peano bound applies");
  }
  return error_bound_check(rule, f, kernel_sup_norm(rule, *f.s()));
}

BoundCheck error_bound_check(const QuadratureRule& rule, const TestFunction& f,
                             const PeanoProfile& profile) {
  if (!f.s() || !f.variation()) {
    throw Error(ErrorKind::precondition_violation,
                f.name() + " has no finite smoothness order; no Peano bound applies");
  }
  if (profile.s != *f.s()) {
    throw Error(ErrorKind::precondition_violation, "profile order differs from f's order");
  }
  const IntegralValue exact = f.exact_integral(rule.weight());
  const double approx = apply(rule, f.evaluator());

  double magnitude = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    magnitude += std::abs(rule.weights()[j] * f(rule.nodes()[j]));
  }
  // Rounding in Q[f] and in the reference value of I_w[f].
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double eval_slack = 8.0 * eps * (magnitude + std::abs(exact.value));
  if (exact.oracle_computed) eval_slack += 1e-13 * std::abs(exact.value);

  BoundCheck out;
  out.actual_error = std::abs(exact.value - approx);
  out.kernel_bound = profile.sup_norm * *f.variation();
  if (profile.freud_bound) out.freud_bound = *profile.freud_bound * *f.variation();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (out.actual_error > out.kernel_bound * (1.0 + 1e-10) + eval_slack) {
    throw BoundViolation(out.actual_error, out.kernel_bound, out.freud_bound.value_or(nan),
                         "quadrature error exceeds sup|K_s| Var f^(s) for " + f.name());
  }
  if (out.freud_bound && out.kernel_bound > *out.freud_bound * (1.0 + 1e-12)) {
    throw BoundViolation(out.actual_error, out.kernel_bound, *out.freud_bound,
                         "kernel bound exceeds Freud's bound for " + f.name());
  }
  return out;
}

std::vector<ScalingSample> compound_kernel_scaling(const QuadratureRule& elementary, int s,
                                                   std::span<const int> n_list) {
  if (!elementary.weight().is_unit()) {
    throw Error(ErrorKind::weight_mismatch, "compound kernel scaling needs the legendre weight");
  }
  if (s > elementary.declared_exactness()) {
    throw Error(ErrorKind::precondition_violation,
                "s exceeds the elementary rule's exactness degree");
  }
  const double base = kernel_sup_norm(elementary, s).sup_norm;
  std::vector<ScalingSample> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    const PeanoProfile p = kernel_sup_norm(compound_rule(elementary, n), s);
    const double scaled = p.sup_norm * std::pow(static_cast<double>(n), s + 1);
    const double ratio = scaled / base;
    if (!(std::abs(ratio - 1.0) <= scaling_tolerance)) {
      throw ScalingViolation(n, ratio,
                             "sup|K_s(Q^(n))| n^{s+1} differs from sup|K_s(Q)| at n = " +
                                 std::to_string(n));
    }
    out.push_back({n, p.sup_norm, scaled});
  }
  return out;
}

}  // namespace bvquad
