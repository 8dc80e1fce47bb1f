#include "bvquad/reference_integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bvquad/error.hpp"

namespace bvquad::reference {
namespace {

constexpr int kPanelPoints = 20;
constexpr int kMaxDoublings = 16;

struct PanelRule {
  std::array<double, kPanelPoints> nodes{};
  std::array<double, kPanelPoints> weights{};
};

// Gauss-Legendre nodes by Newton iteration on P_n from the Chebyshev-like
// initial guesses.
PanelRule make_panel_rule() {
  PanelRule rule;
  constexpr int n = kPanelPoints;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const PanelRule& panel_rule() {
  static const PanelRule rule = make_panel_rule();
  return rule;
}

struct PanelSums {
  double value = 0.0;
  double magnitude = 0.0;
};

PanelSums composite(const std::function<double(double)>& g, double a, double b, int panels) {
  const PanelRule& rule = panel_rule();
  const double h = (b - a) / panels;
  PanelSums out;
  double comp = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double left = a + p * h;
    const double mid = left + 0.5 * h;
    for (int j = 0; j < kPanelPoints; ++j) {
      const double v = rule.weights[j] * 0.5 * h * g(mid + 0.5 * h * rule.nodes[j]);
      // Neumaier summation
      const double t = out.value + v;
      if (std::abs(out.value) >= std::abs(v)) {
        comp += (out.value - t) + v;
      } else {
        comp += (v - t) + out.value;
      }
      out.value = t;
      out.magnitude += std::abs(v);
    }
  }
  out.value += comp;
  return out;
}

}  // namespace

double integrate(const std::function<double(double)>& g, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  PanelSums prev = composite(g, a, b, 1);
  for (int level = 1; level <= kMaxDoublings; ++level) {
    const PanelSums next = composite(g, a, b, 1 << level);
    const double scale = std::max(std::abs(next.value), next.magnitude);
    if (std::abs(next.value - prev.value) <= rel_tol * scale) return next.value;
    prev = next;
  }
  // The finest level is returned; callers only use smooth integrands where
  // this is not reached.
  return prev.value;
}

double weighted_integral(const WeightSpec& weight, const std::function<double(double)>& f,
                         double lo, double hi, std::span<const double> breakpoints,
                         double rel_tol) {
  if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi)) {
    throw Error(ErrorKind::domain_error, "weighted_integral range must lie in [-1,1]");
  }
  if (lo == hi) return 0.0;

  const double nu = 2.0 * weight.lambda();
  const bool graded = nu != std::round(nu);

  std::vector<double> cuts{std::acos(hi), std::acos(lo)};
  for (double x : breakpoints) {
    if (x > lo && x < hi) cuts.push_back(std::acos(x));
  }
  if (graded && cuts.front() == 0.0 && cuts.back() == std::numbers::pi) {
    cuts.push_back(0.5 * std::numbers::pi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double ws = nu == 0.0 ? 1.0 : std::pow(s, nu);
    return ws * f(std::cos(theta));
  };

  // theta = end +- len u^p moves a sin^nu endpoint singularity to u^{p(nu+1)-1}.
  const double p = graded ? std::ceil(12.0 / (nu + 1.0)) : 1.0;

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (graded && a == 0.0) {
      total += integrate(
          [&](double u) { return integrand(b * std::pow(u, p)) * b * p * std::pow(u, p - 1.0); },
          0.0, 1.0, rel_tol);
    } else if (graded && b == std::numbers::pi) {
      const double len = b - a;
      total += integrate(
          [&](double u) {
            return integrand(b - len * std::pow(u, p)) * len * p * std::pow(u, p - 1.0);
          },
          0.0, 1.0, rel_tol);
    } else {
      total += integrate(integrand, a, b, rel_tol);
    }
  }
  return total;
}

}  // namespace bvquad::reference
