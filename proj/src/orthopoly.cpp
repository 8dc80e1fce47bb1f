#include "bvquad/orthopoly.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "bvquad/error.hpp"
#include "bvquad/tridiagonal.hpp"

namespace bvquad {
namespace {

// \int_{-1}^1 (1-x^2)^{lambda-1/2} dx = sqrt(pi) Gamma(lambda+1/2) / Gamma(lambda+1)
double ultraspherical_mass(double lambda) {
  if (lambda == 0.5) return 2.0;
  if (lambda == 0.0) return std::numbers::pi;
  if (lambda == 1.0) return 0.5 * std::numbers::pi;
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(lambda + 0.5) -
                  std::lgamma(lambda + 1.0));
}

// Gauss-Jacobi rule on [0,1] for (1-u)^a, a = lambda - 1/2.
struct JacobiRule {
  std::vector<double> u;
  std::vector<double> w;
};

constexpr int kJacobiPoints = 40;

JacobiRule make_jacobi_rule(double lambda) {
  const double a = lambda - 0.5;
  const int m = kJacobiPoints;
  // Monic Jacobi recurrence on [-1,1] for (1-y)^a (1+y)^0.
  std::vector<double> diag(m);
  std::vector<double> off(m - 1);
  for (int k = 0; k < m; ++k) {
    const double p = 2.0 * k + a;
    diag[k] = k == 0 ? -a / (a + 2.0) : -a * a / (p * (p + 2.0));
    if (k > 0) {
      const double beta = 4.0 * k * (k + a) * k * (k + a) / (p * p * (p + 1.0) * (p - 1.0));
      off[k - 1] = std::sqrt(beta);
    }
  }
  const TridiagonalEigen eig = tridiagonal_eigen(std::move(diag), std::move(off));
  // mass on [-1,1] is 2^{a+1}/(a+1); mapping to [0,1] scales by 2^{-(a+1)}
  const double mass01 = 1.0 / (a + 1.0);
  JacobiRule rule;
  for (int i = 0; i < m; ++i) {
    rule.u.push_back(0.5 * (eig.values[i] + 1.0));
    rule.w.push_back(mass01 * eig.first_components[i] * eig.first_components[i]);
  }
  return rule;
}

std::shared_ptr<const JacobiRule> jacobi_rule(double lambda) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const JacobiRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[lambda];
  if (!slot) slot = std::make_shared<const JacobiRule>(make_jacobi_rule(lambda));
  return slot;
}

// \int_t^1 (x-t)^s w(x) dx for t >= 0. With x = t + (1-t)u this is
// (1-t)^{s+lambda+1/2} \int_0^1 u^s (1-u)^a ((1+t) + (1-t)u)^a du, whose last
// factor is analytic well beyond [0,1].
double upper_truncated_moment(const WeightSpec& weight, int s, double t) {
  const double a = weight.lambda() - 0.5;
  const auto rule = jacobi_rule(weight.lambda());
  // x^a with a a half-integer is a sqrt times an integer power; pow is the
  // bottleneck of the kernel sup search otherwise.
  const double twice = 2.0 * a;
  const bool half_integer = twice == std::round(twice) && std::abs(twice) < 64.0;
  auto power = [&](double x) {
    if (!half_integer) return std::pow(x, a);
    const int whole = static_cast<int>(std::floor(a));
    double p = 1.0;
    for (int i = 0; i < std::abs(whole); ++i) p *= x;
    const double r = a != whole ? std::sqrt(x) : 1.0;
    return whole >= 0 ? r * p : r / p;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->u.size(); ++i) {
    const double u = rule->u[i];
    double us = 1.0;
    for (int k = 0; k < s; ++k) us *= u;
    sum += rule->w[i] * us * power((1.0 + t) + (1.0 - t) * u);
  }
  double scale = 1.0;
  for (int k = 0; k <= s; ++k) scale *= 1.0 - t;
  return scale * power(1.0 - t) * sum;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

WeightSpec::WeightSpec(WeightKind kind, double lambda)
    : kind_(kind), lambda_(lambda), mass_(ultraspherical_mass(lambda)), freud_M_(1.0) {}

WeightSpec WeightSpec::legendre() { return {WeightKind::legendre, 0.5}; }
WeightSpec WeightSpec::chebyshev1() { return {WeightKind::chebyshev1, 0.0}; }
WeightSpec WeightSpec::chebyshev2() { return {WeightKind::chebyshev2, 1.0}; }

WeightSpec WeightSpec::ultraspherical(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw Error(ErrorKind::domain_error, "ultraspherical lambda must be finite and >= 0");
  }
  return {WeightKind::ultraspherical, lambda};
}

double WeightSpec::operator()(double x) const {
  if (is_unit()) return 1.0;
  return std::pow(1.0 - x * x, lambda_ - 0.5);
}

std::string WeightSpec::descriptor() const {
  switch (kind_) {
    case WeightKind::legendre:
      return "legendre";
    case WeightKind::chebyshev1:
      return "chebyshev1";
    case WeightKind::chebyshev2:
      return "chebyshev2";
    case WeightKind::ultraspherical: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "ultraspherical:%.17g", lambda_);
      return buf;
    }
  }
  return "unknown";
}

WeightSpec parse_weight(const std::string& text) {
  if (text == "legendre") return WeightSpec::legendre();
  if (text == "chebyshev1") return WeightSpec::chebyshev1();
  if (text == "chebyshev2") return WeightSpec::chebyshev2();
  const std::string prefix = "ultraspherical:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    double lambda = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), lambda);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw Error(ErrorKind::invalid_argument, "bad ultraspherical parameter '" + rest + "'");
    }
    return WeightSpec::ultraspherical(lambda);
  }
  throw Error(ErrorKind::unsupported_weight, "unknown weight '" + text + "'");
}

RecurrenceTable recurrence(const WeightSpec& weight, int n) {
  if (n < 1) throw Error(ErrorKind::size_error, "recurrence needs n >= 1");
  RecurrenceTable table;
  table.alpha.assign(n, 0.0);
  table.beta.assign(n, 0.0);
  table.beta[0] = weight.mass();
  const double lambda = weight.lambda();
  for (int k = 1; k < n; ++k) {
    if (k == 1) {
      // limit of the general formula, also valid at lambda = 0
      table.beta[1] = 1.0 / (2.0 * (1.0 + lambda));
    } else if (weight.is_unit()) {
      const double kk = static_cast<double>(k) * k;
      table.beta[k] = kk / (4.0 * kk - 1.0);
    } else {
      table.beta[k] = k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0));
    }
  }
  return table;
}

double moment(const WeightSpec& weight, int k) {
  if (k < 0) throw Error(ErrorKind::domain_error, "moment degree must be >= 0");
  if (k % 2 == 1) return 0.0;
  if (weight.is_unit()) return 2.0 / (k + 1.0);
  // mu_{j+2} = mu_j (j+1) / (j + 2 lambda + 2)
  double mu = weight.mass();
  for (int j = 0; j < k; j += 2) mu *= (j + 1.0) / (j + 2.0 * weight.lambda() + 2.0);
  return mu;
}

std::vector<double> chebyshev_moments(const WeightSpec& weight, int count) {
  std::vector<double> out(std::max(count, 0), 0.0);
  if (count <= 0) return out;
  // With x = cos(theta): c_k = \int_0^pi sin^nu(theta) cos(k theta) d theta,
  // nu = 2 lambda, and c_{k+2} = c_k (k - nu) / (k + nu + 2) for even k.
  const double nu = 2.0 * weight.lambda();
  double c = weight.mass();
  for (int k = 0; k < count; k += 2) {
    out[k] = c;
    c *= (k - nu) / (k + nu + 2.0);
  }
  return out;
}

double chebyshev_moment(const WeightSpec& weight, int k) {
  if (k < 0) throw Error(ErrorKind::domain_error, "moment degree must be >= 0");
  return chebyshev_moments(weight, k + 1)[k];
}

double truncated_moment(const WeightSpec& weight, int s, double t) {
  if (!(t >= -1.0 && t <= 1.0)) {
    throw Error(ErrorKind::domain_error, "truncated_moment needs t in [-1,1]");
  }
  if (s < 0) throw Error(ErrorKind::domain_error, "truncated_moment needs s >= 0");
  if (weight.is_unit()) return std::pow(1.0 - t, s + 1) / (s + 1);
  if (t == 1.0) return 0.0;
  if (t >= 0.0) return upper_truncated_moment(weight, s, t);
  // Full moment of (x-t)^s minus the reflected tail over [-1, t]; all terms
  // of the binomial expansion are nonnegative for t < 0.
  double full = 0.0;
  for (int k = 0; k <= s; k += 2) full += binomial(s, k) * std::pow(-t, s - k) * moment(weight, k);
  const double tail = upper_truncated_moment(weight, s, -t);
  return full - (s % 2 == 0 ? tail : -tail);
}

DoubleDouble truncated_moment_dd(const WeightSpec& weight, int s, double t) {
  if (!weight.is_unit()) return DoubleDouble{truncated_moment(weight, s, t)};
  if (!(t >= -1.0 && t <= 1.0)) {
    throw Error(ErrorKind::domain_error, "truncated_moment needs t in [-1,1]");
  }
  const DoubleDouble u = dd::two_sum(1.0, -t);
  return dd::div(dd::pow(u, s + 1), static_cast<double>(s + 1));
}

}  // namespace bvquad
