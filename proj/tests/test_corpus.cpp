#include <cmath>
#include <random>

#include "bvquad/corpus.hpp"
#include "bvquad/reference_integrator.hpp"
#include "bvquad/rules.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bvquad;

TEST_SUITE("corpus") {
  TEST_CASE("trunc_power examples") {
    const TestFunction step = trunc_power(0.0, 0);
    CHECK(step.variation() == 1.0);
    CHECK(step.exact_integral(WeightSpec::legendre()).value == 1.0);
    CHECK(step(0.0) == 0.0);
    CHECK(step(1e-300) == 1.0);

    const TestFunction q = trunc_power(0.3, 2);
    CHECK(q.exact_integral(WeightSpec::legendre()).value ==
          doctest::Approx(0.7 * 0.7 * 0.7 / 6.0).epsilon(1e-15));
    CHECK_FALSE(q.exact_integral(WeightSpec::legendre()).oracle_computed);
    CHECK(q.name() == "truncpower:0.3:2");
    CHECK(q.singularity() == 0.3);

    const IntegralValue u = q.exact_integral(WeightSpec::ultraspherical(1.0));
    CHECK(u.oracle_computed);
    // sqrt(1-x^2) (x-0.3)^2/2 on [0.3,1], independently in the plain variable
    const double ref = reference::integrate(
        [](double x) { return std::sqrt((1 - x) * (1 + x)) * (x - 0.3) * (x - 0.3) / 2; }, 0.3,
        1.0, 1e-15);
    CHECK(u.value == doctest::Approx(ref).epsilon(1e-9));
    CHECK(thrown_kind([] { trunc_power(1.0, 1); }) == ErrorKind::domain_error);
  }

  TEST_CASE("abs_power examples") {
    const TestFunction a = abs_power(0.0, 3);
    CHECK(a.variation() == 12.0);
    CHECK(a.exact_integral(WeightSpec::legendre()).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a(-0.5) == 0.125);
    CHECK(abs_power(0.25, 1).exact_integral(WeightSpec::legendre()).value ==
          doctest::Approx(1.0625).epsilon(1e-15));
    CHECK(abs_power(0.3, 1).variation() == 2.0);
    for (int k : {0, 2, 4, -1}) {
      CHECK(thrown_kind([k] { abs_power(0.3, k); }) == ErrorKind::invalid_argument);
    }
  }

  TEST_CASE("smooth control") {
    const TestFunction e = smooth_control();
    CHECK_FALSE(e.s().has_value());
    CHECK(e(0.0) == 1.0);
    CHECK(e.exact_integral(WeightSpec::legendre()).value ==
          doctest::Approx(2.3504023872876028).epsilon(1e-16));
    const double q = bvquad::apply(gauss_rule(WeightSpec::legendre(), 16), e.evaluator());
    CHECK(std::abs(q - 2.3504023872876028) / 2.3504023872876028 < 1e-15);
  }

  TEST_CASE("closed forms agree with the reference integrator") {
    std::vector<TestFunction> fs = standard_corpus();
    fs.push_back(trunc_power(-0.71, 3));
    fs.push_back(abs_power(0.55, 5));
    fs.push_back(smooth_control());
    for (const TestFunction& f : fs) {
      const double closed = f.exact_integral(WeightSpec::legendre()).value;
      const double c = f.singularity().value_or(0.0);
      const double ref = reference::integrate(f.evaluator(), -1.0, c, 1e-15) +
                         reference::integrate(f.evaluator(), c, 1.0, 1e-15);
      CHECK(closed == doctest::Approx(ref).epsilon(1e-13));
    }
  }

  TEST_CASE("shape properties on random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double c = 0.9 * unif(rng);
      const int s = trial % 4;
      const TestFunction tp = trunc_power(c, s);
      double x = unif(rng);
      double y = unif(rng);
      if (x > y) std::swap(x, y);
      if (y <= c) {
        CHECK(tp(y) == 0.0);
      } else if (x > c) {
        CHECK(tp(x) > 0.0);
        CHECK(tp(y) >= tp(x));
      }
      const TestFunction ap = abs_power(c, 2 * (trial % 3) + 1);
      // dyadic c and h keep c +- h exact
      const double cd = std::round(c * 1024) / 1024;
      const TestFunction apd = abs_power(cd, 2 * (trial % 3) + 1);
      const double h = std::round(std::abs(unif(rng)) * (1.0 - std::abs(cd)) * 1024) / 1024;
      CHECK(apd(cd + h) == apd(cd - h));
      CHECK(ap(c) == 0.0);
    }
  }

  TEST_CASE("descriptor parsing") {
    CHECK(parse_function("truncpower:0.3:2").name() == "truncpower:0.3:2");
    CHECK(parse_function("abspower:0:3").variation() == 12.0);
    CHECK(parse_function("exp").name() == "exp");
    for (const char* bad : {"", "sin", "truncpower:0.3", "truncpower:x:1", "abspower:0.3:2",
                            "truncpower:0.3:1.5", "truncpower:0.3:2:1"}) {
      CHECK(thrown_kind([bad] { parse_function(bad); }).has_value());
    }
    CHECK(thrown_kind([] { parse_function("truncpower:2:1"); }) == ErrorKind::domain_error);
  }

  TEST_CASE("standard corpus contents") {
    const std::vector<TestFunction> c = standard_corpus();
    REQUIRE(c.size() == 7);
    for (int s = 0; s <= 3; ++s) CHECK(c[s].s() == s);
    CHECK(c[6].name() == "abspower:0:3");
  }
}
