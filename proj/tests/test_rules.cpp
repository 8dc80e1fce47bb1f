#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bvquad/rules.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bvquad;
using boost::multiprecision::cpp_rational;

namespace {

void check_rule(const QuadratureRule& rule, const std::vector<double>& x,
                const std::vector<double>& a, double tol) {
  REQUIRE(rule.size() == x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    CHECK(std::abs(rule.nodes()[j] - x[j]) <= tol);
    CHECK(std::abs(rule.weights()[j] - a[j]) <= tol);
  }
}

// Weights of the interpolatory rule on rational nodes for the unit weight:
// solve sum_j a_j x_j^k = 2/(k+1), k < n, by exact Gaussian elimination.
std::vector<double> rational_interpolatory_weights(const std::vector<cpp_rational>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<cpp_rational>> m(n, std::vector<cpp_rational>(n + 1));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      cpp_rational xp = 1;
      for (std::size_t i = 0; i < k; ++i) xp *= nodes[j];
      m[k][j] = xp;
    }
    m[k][n] = k % 2 == 0 ? cpp_rational(2, static_cast<int>(k) + 1) : cpp_rational(0);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (m[piv][c] == 0) ++piv;
    std::swap(m[piv], m[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const cpp_rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = (m[j][n] / m[j][j]).convert_to<double>();
  return w;
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("gauss-legendre closed forms, n <= 5") {
    const WeightSpec leg = WeightSpec::legendre();
    check_rule(gauss_rule(leg, 1), {0.0}, {2.0}, 1e-15);
    const double r3 = 1.0 / std::sqrt(3.0);
    check_rule(gauss_rule(leg, 2), {-r3, r3}, {1.0, 1.0}, 1e-15);
    const double r35 = std::sqrt(0.6);
    check_rule(gauss_rule(leg, 3), {-r35, 0.0, r35}, {5.0 / 9, 8.0 / 9, 5.0 / 9}, 1e-14);
    const double s65 = 2.0 / 7.0 * std::sqrt(6.0 / 5.0);
    const double x4a = std::sqrt(3.0 / 7.0 - s65);
    const double x4b = std::sqrt(3.0 / 7.0 + s65);
    const double w4a = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w4b = (18.0 - std::sqrt(30.0)) / 36.0;
    check_rule(gauss_rule(leg, 4), {-x4b, -x4a, x4a, x4b}, {w4b, w4a, w4a, w4b}, 1e-14);
    const double x5a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double x5b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double w5a = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double w5b = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    check_rule(gauss_rule(leg, 5), {-x5b, -x5a, 0.0, x5a, x5b},
               {w5b, w5a, 128.0 / 225.0, w5a, w5b}, 1e-14);
  }

  TEST_CASE("gauss-chebyshev closed form") {
    for (int n : {1, 2, 7, 16, 33}) {
      const QuadratureRule g = gauss_rule(WeightSpec::chebyshev1(), n);
      for (int j = 1; j <= n; ++j) {
        const double x = std::cos((2.0 * j - 1.0) * std::numbers::pi / (2.0 * n));
        CHECK(std::abs(g.nodes()[n - j] - x) <= 1e-14);
        CHECK(std::abs(g.weights()[n - j] - std::numbers::pi / n) <= 1e-14);
      }
    }
  }

  TEST_CASE("large gauss rules build") {
    const QuadratureRule g = gauss_rule(WeightSpec::legendre(), 4096);
    CHECK(g.size() == 4096);
    CHECK(apply(g, [](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  }

  TEST_CASE("radau examples") {
    const WeightSpec leg = WeightSpec::legendre();
    check_rule(radau_rule(leg, 2, FixedEnd::left), {-1.0, 1.0 / 3.0}, {0.5, 1.5}, 1e-14);
    check_rule(radau_rule(leg, 2, FixedEnd::right), {-1.0 / 3.0, 1.0}, {1.5, 0.5}, 1e-14);
    for (int n : {2, 3, 5, 8, 13}) {
      const QuadratureRule r = radau_rule(leg, n, FixedEnd::left);
      CHECK(r.nodes().front() == -1.0);
      const int d = 2 * n - 2;
      const double exact = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
      CHECK(apply(r, [d](double x) { return std::pow(x, d); }) ==
            doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(thrown_kind([&] { radau_rule(leg, 1, FixedEnd::left); }) == ErrorKind::size_error);
  }

  TEST_CASE("node families") {
    CHECK(node_family(NodeFamily::clenshaw_curtis, 3) == std::vector<double>{-1.0, 0.0, 1.0});
    const auto p = node_family(NodeFamily::polya, 2);
    CHECK(p[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(node_family(NodeFamily::filippi, 1) == std::vector<double>{0.0});
    CHECK(thrown_kind([] { node_family(NodeFamily::clenshaw_curtis, 1); }) ==
          ErrorKind::size_error);
    CHECK(thrown_kind([] { node_family(NodeFamily::polya, 0); }) == ErrorKind::size_error);
    // cos forms of the definitions
    for (int n : {2, 5, 10, 17}) {
      const auto cc = node_family(NodeFamily::clenshaw_curtis, n);
      const auto fi = node_family(NodeFamily::filippi, n);
      const auto po = node_family(NodeFamily::polya, n);
      for (int j = 0; j < n; ++j) {
        CHECK(std::abs(cc[n - 1 - j] - std::cos(j * std::numbers::pi / (n - 1))) <= 1e-15);
        CHECK(std::abs(fi[n - 1 - j] - std::cos((j + 1) * std::numbers::pi / (n + 1))) <= 1e-15);
        CHECK(std::abs(po[n - 1 - j] - std::cos((2 * j + 1) * std::numbers::pi / (2 * n))) <=
              1e-15);
      }
    }
  }

  TEST_CASE("interpolatory rule examples") {
    const WeightSpec leg = WeightSpec::legendre();
    check_rule(interpolatory_rule(leg, {-1.0, 0.0, 1.0}), {-1.0, 0.0, 1.0},
               {1.0 / 3, 4.0 / 3, 1.0 / 3}, 1e-14);
    check_rule(interpolatory_rule(leg, {0.0}), {0.0}, {2.0}, 1e-15);
    const QuadratureRule p2 = interpolatory_rule(leg, node_family(NodeFamily::polya, 2));
    CHECK(p2.weights()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p2.weights()[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(thrown_kind([&] { interpolatory_rule(leg, {0.1, 0.1}); }) == ErrorKind::ill_conditioned);
    CHECK(thrown_kind([&] { interpolatory_rule(leg, {0.0, 1.5}); }) == ErrorKind::domain_error);
    // unsorted input is sorted
    const QuadratureRule s = interpolatory_rule(leg, {1.0, -1.0, 0.0});
    CHECK(s.nodes()[0] == -1.0);
  }

  TEST_CASE("interpolatory weights match exact rational solutions, n <= 6") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-60, 60);
    for (int n = 1; n <= 6; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> picks;
        while (static_cast<int>(picks.size()) < n) {
          const int v = num(rng);
          if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
        }
        std::sort(picks.begin(), picks.end());
        std::vector<cpp_rational> xr;
        std::vector<double> xd;
        for (int v : picks) {
          xr.emplace_back(v, 64);
          xd.push_back(v / 64.0);
        }
        const std::vector<double> exact = rational_interpolatory_weights(xr);
        const QuadratureRule q = interpolatory_rule(WeightSpec::legendre(), xd);
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(q.weights()[j] - exact[j]) <= 1e-12 * std::max(1.0, std::abs(exact[j])));
        }
      }
    }
  }

  TEST_CASE("chebyshev family rules need the unit weight") {
    CHECK(thrown_kind([] {
            chebyshev_family_rule(NodeFamily::clenshaw_curtis, 5, WeightSpec::chebyshev1());
          }) == ErrorKind::unsupported_weight);
    const QuadratureRule cc = chebyshev_family_rule(NodeFamily::clenshaw_curtis, 3);
    CHECK(cc.family() == RuleFamily::clenshaw_curtis);
  }

  TEST_CASE("compound rule examples") {
    const QuadratureRule mid = elementary_rule("midpoint");
    check_rule(compound_rule(mid, 2), {-0.5, 0.5}, {1.0, 1.0}, 0.0);
    const QuadratureRule trap = elementary_rule("trapezoid");
    check_rule(compound_rule(trap, 2), {-1.0, 0.0, 1.0}, {0.5, 1.0, 0.5}, 0.0);
    for (const char* name : {"midpoint", "trapezoid", "simpson", "gauss2"}) {
      const QuadratureRule el = elementary_rule(name);
      const QuadratureRule one = compound_rule(el, 1);
      CHECK(std::equal(one.nodes().begin(), one.nodes().end(), el.nodes().begin()));
      CHECK(std::equal(one.weights().begin(), one.weights().end(), el.weights().begin()));
      const QuadratureRule c = compound_rule(el, 7);
      REQUIRE(c.compound_origin().has_value());
      CHECK(c.compound_origin()->copies == 7);
      CHECK(c.declared_exactness() == el.declared_exactness());
    }
    CHECK(compound_rule(elementary_rule("simpson"), 4).size() == 9);
    const QuadratureRule cheb = gauss_rule(WeightSpec::chebyshev1(), 2);
    CHECK(thrown_kind([&] { compound_rule(cheb, 2); }) == ErrorKind::weight_mismatch);
    CHECK(thrown_kind([] { elementary_rule("boole"); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("apply examples") {
    const QuadratureRule g2 = gauss_rule(WeightSpec::legendre(), 2);
    CHECK(apply(g2, [](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const QuadratureRule simpson = interpolatory_rule(WeightSpec::legendre(), {-1.0, 0.0, 1.0});
    CHECK(apply(simpson, [](double x) { return x * x * x * x; }) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double lambda : {0.0, 0.5, 1.0, 3.0}) {
      const WeightSpec w = WeightSpec::ultraspherical(lambda);
      for (int n : {1, 4, 9}) {
        CHECK(apply(gauss_rule(w, n), [](double) { return 1.0; }) ==
              doctest::Approx(w.mass()).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("exactness degrees") {
    CHECK(exactness_degree(gauss_rule(WeightSpec::legendre(), 3), 20) == 5);
    const QuadratureRule cc9 =
        interpolatory_rule(WeightSpec::legendre(), node_family(NodeFamily::clenshaw_curtis, 9));
    CHECK(exactness_degree(cc9, 30) == 9);
    CHECK(exactness_degree(chebyshev_family_rule(NodeFamily::clenshaw_curtis, 2), 10) == 1);
    for (int n = 1; n <= 24; ++n) {
      CHECK(exactness_degree(gauss_rule(WeightSpec::legendre(), n), 2 * n + 2) == 2 * n - 1);
      if (n >= 2) {
        CHECK(exactness_degree(radau_rule(WeightSpec::chebyshev2(), n, FixedEnd::right),
                               2 * n + 2) == 2 * n - 2);
      }
    }
    CHECK(exactness_degree(elementary_rule("midpoint"), 5) == 1);
    CHECK(exactness_degree(elementary_rule("simpson"), 8) == 3);
  }

  TEST_CASE("rule invariants") {
    const WeightSpec leg = WeightSpec::legendre();
    CHECK(thrown_kind([&] { QuadratureRule(leg, {}, {}, RuleFamily::custom, 0); }) ==
          ErrorKind::invalid_rule);
    CHECK(thrown_kind([&] {
            QuadratureRule(leg, {0.5, 0.1}, {1.0, 1.0}, RuleFamily::custom, 0);
          }) == ErrorKind::invalid_rule);
    CHECK(thrown_kind([&] { QuadratureRule(leg, {0.0}, {1.0}, RuleFamily::custom, 0); }) ==
          ErrorKind::invalid_rule);
    CHECK(thrown_kind([&] {
            QuadratureRule(leg, {-0.5, 0.5}, {3.0, -1.0}, RuleFamily::gauss, 0);
          }) == ErrorKind::invalid_rule);
    // negative weights are allowed for custom rules
    const QuadratureRule neg(leg, {-0.5, 0.5}, {3.0, -1.0}, RuleFamily::custom, 0);
    CHECK_FALSE(neg.is_positive());
  }

  TEST_CASE("family names") {
    CHECK(parse_family("cc") == RuleFamily::clenshaw_curtis);
    CHECK(parse_family("radau") == RuleFamily::radau_left);
    for (RuleFamily f : {RuleFamily::gauss, RuleFamily::radau_left, RuleFamily::radau_right,
                         RuleFamily::clenshaw_curtis, RuleFamily::filippi, RuleFamily::polya,
                         RuleFamily::kronrod, RuleFamily::compound, RuleFamily::custom}) {
      CHECK(parse_family(to_string(f)) == f);
    }
    CHECK(thrown_kind([] { parse_family("newton-cotes"); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("positivity of the Remark families") {
    for (int n = 2; n <= 32; ++n) {
      for (const QuadratureRule& r :
           {gauss_rule(WeightSpec::legendre(), n), radau_rule(WeightSpec::legendre(), n, FixedEnd::left),
            chebyshev_family_rule(NodeFamily::clenshaw_curtis, n),
            chebyshev_family_rule(NodeFamily::filippi, n),
            chebyshev_family_rule(NodeFamily::polya, n)}) {
        CHECK(r.is_positive());
      }
    }
  }
}
