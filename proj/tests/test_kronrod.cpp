#include <cmath>
#include <vector>

#include "bvquad/rules.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bvquad;

TEST_SUITE("kronrod") {
  TEST_CASE("kronrod of the 1-point rule is 3-point gauss") {
    const QuadratureRule k = kronrod_rule(WeightSpec::legendre(), 1);
    const QuadratureRule g = gauss_rule(WeightSpec::legendre(), 3);
    REQUIRE(k.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(k.nodes()[j] - g.nodes()[j]) <= 1e-13);
      CHECK(std::abs(k.weights()[j] - g.weights()[j]) <= 1e-13);
    }
    CHECK(std::abs(k.nodes()[2] - std::sqrt(0.6)) <= 1e-13);
    CHECK(std::abs(k.weights()[1] - 8.0 / 9.0) <= 1e-13);
  }

  TEST_CASE("known 7-point extension of 3-point gauss") {
    // G3K7, from a 30-digit solve of the Stieltjes and moment equations.
    const std::vector<double> x{0.96049126870802028, 0.77459666924148338, 0.43424374934680256};
    const std::vector<double> a{0.10465622602646727, 0.26848808986833344, 0.40139741477596222};
    const QuadratureRule k = kronrod_rule(WeightSpec::legendre(), 3);
    REQUIRE(k.size() == 7);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(k.nodes()[6 - i] - x[i]) <= 1e-14);
      CHECK(std::abs(k.weights()[6 - i] - a[i]) <= 1e-14);
    }
    CHECK(std::abs(k.weights()[3] - 0.45091653865847414) <= 1e-14);
  }

  TEST_CASE("gauss nodes nest inside the kronrod nodes") {
    for (double lambda : {0.0, 0.25, 0.5, 1.0, 3.0}) {
      const WeightSpec w = WeightSpec::ultraspherical(lambda);
      for (int n : {1, 2, 3, 4, 7, 10, 16, 31}) {
        const QuadratureRule k = kronrod_rule(w, n);
        const QuadratureRule g = gauss_rule(w, n);
        REQUIRE(k.size() == static_cast<std::size_t>(2 * n + 1));
        for (std::size_t j = 0; j < g.size(); ++j) {
          CHECK(std::abs(k.nodes()[2 * j + 1] - g.nodes()[j]) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("kronrod exactness >= 3n+1") {
    CHECK(exactness_degree(kronrod_rule(WeightSpec::legendre(), 2), 20) >= 7);
    for (double lambda : {0.0, 0.5, 1.0, 3.0}) {
      const WeightSpec w = WeightSpec::ultraspherical(lambda);
      for (int n = 1; n <= 24; ++n) {
        const QuadratureRule k = kronrod_rule(w, n);
        CHECK(exactness_degree(k, 3 * n + 1) >= 3 * n + 1);
        CHECK(k.declared_exactness() == 3 * n + 1);
      }
    }
  }

  TEST_CASE("kronrod weights are positive on the supported lambda range") {
    CHECK(kronrod_rule(WeightSpec::ultraspherical(3.0), 2).is_positive());
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0, 3.0}) {
      for (int n = 1; n <= 32; ++n) {
        CHECK(kronrod_rule(WeightSpec::ultraspherical(lambda), n).is_positive());
      }
    }
  }

  TEST_CASE("large extensions build") {
    // The mixed moments of the extension underflow without rescaling here.
    for (int n : {600, 1024}) {
      const QuadratureRule k = kronrod_rule(WeightSpec::legendre(), n);
      CHECK(k.size() == static_cast<std::size_t>(2 * n + 1));
      CHECK(apply(k, [](double x) { return std::exp(x); }) ==
            doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-13));
    }
  }

  TEST_CASE("unsupported lambda") {
    for (double lambda : {1.5, 2.0, 2.5, 4.0}) {
      CHECK(thrown_kind([&] { kronrod_rule(WeightSpec::ultraspherical(lambda), 4); }) ==
            ErrorKind::unsupported_lambda);
    }
    CHECK(thrown_kind([] { kronrod_rule(WeightSpec::legendre(), 0); }) == ErrorKind::size_error);
  }
}
