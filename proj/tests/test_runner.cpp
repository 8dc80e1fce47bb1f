#include <cmath>
#include <vector>

#include "bvquad/runner.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bvquad;

TEST_SUITE("runner") {
  TEST_CASE("fit_slope examples") {
    const std::vector<ConvergencePoint> two{{2, 0.5}, {4, 0.125}};
    CHECK(fit_slope(two) == doctest::Approx(-2.0).epsilon(1e-15));
    std::vector<ConvergencePoint> cubic;
    for (int n : {2, 4, 8, 16}) cubic.push_back({n, 7.5 * std::pow(n, -3.0)});
    CHECK(std::abs(fit_slope(cubic) + 3.0) <= 1e-12);
    const std::vector<ConvergencePoint> noise{{2, 1e-16}, {4, 1e-16}};
    CHECK(thrown_kind([&] { fit_slope(noise); }) == ErrorKind::insufficient_data);
    const std::vector<ConvergencePoint> same{{4, 1e-3}, {4, 2e-3}};
    CHECK(thrown_kind([&] { fit_slope(same); }) == ErrorKind::insufficient_data);
  }

  TEST_CASE("grids") {
    CHECK(default_grid() == std::vector<int>{4, 8, 16, 32, 64, 128, 256, 512, 1024});
    CHECK(geometric_grid(3, 100, 3) == std::vector<int>{3, 9, 27, 81});
    CHECK(geometric_grid(5, 5, 2) == std::vector<int>{5});
    CHECK(thrown_kind([] { geometric_grid(0, 8, 2); }) == ErrorKind::invalid_argument);
    CHECK(thrown_kind([] { geometric_grid(8, 4, 2); }) == ErrorKind::invalid_argument);
    CHECK(thrown_kind([] { geometric_grid(1, 4, 1); }) == ErrorKind::invalid_argument);
    const FitWindow w = default_fit_window(9);
    CHECK(w.first == 0);
    CHECK(w.last == 9);
  }

  TEST_CASE("gauss on trunc_power(0.3, 2)") {
    const std::vector<int> grid = default_grid();
    const ConvergenceReport r =
        run_convergence(RuleFamily::gauss, trunc_power(0.3, 2), WeightSpec::legendre(), grid);
    REQUIRE(r.samples.size() == grid.size());
    CHECK(r.expected_slope == -3.0);
    REQUIRE(r.fitted_slope.has_value());
    CHECK(*r.fitted_slope <= -2.75);
    CHECK(r.pass);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(r.samples[i].n == grid[i]);
      CHECK(r.samples[i].nodes == static_cast<std::size_t>(grid[i]));
      CHECK(r.samples[i].bounds_hold);
      CHECK(r.samples[i].error <= *r.samples[i].kernel_bound * (1 + 1e-10));
      CHECK(*r.samples[i].kernel_bound <= *r.samples[i].freud_bound * (1 + 1e-10));
    }
  }

  TEST_CASE("clenshaw-curtis on abs_power(0, 3)") {
    const std::vector<int> grid = default_grid();
    const ConvergenceReport r = run_convergence(RuleFamily::clenshaw_curtis, abs_power(0.0, 3),
                                                WeightSpec::legendre(), grid);
    CHECK(r.expected_slope == -4.0);
    CHECK(r.pass);
  }

  TEST_CASE("smooth control reaches the noise floor") {
    const std::vector<int> grid = default_grid();
    const ConvergenceReport r =
        run_convergence(RuleFamily::gauss, smooth_control(), WeightSpec::legendre(), grid,
                        FitWindow{3, grid.size()});
    CHECK(r.all_noise);
    CHECK_FALSE(r.fitted_slope.has_value());
    CHECK_FALSE(r.expected_slope.has_value());
    CHECK(r.pass);
    for (const ConvergenceSample& s : r.samples) {
      if (s.n >= 32) CHECK(s.error < noise_floor);
      CHECK_FALSE(s.kernel_bound.has_value());
    }
  }

  TEST_CASE("every positive family passes the rate check") {
    const std::vector<int> grid = default_grid();
    for (RuleFamily fam : {RuleFamily::gauss, RuleFamily::radau_left, RuleFamily::clenshaw_curtis,
                           RuleFamily::polya, RuleFamily::filippi, RuleFamily::kronrod}) {
      for (int s = 0; s <= 3; ++s) {
        const ConvergenceReport r =
            run_convergence(fam, trunc_power(0.3, s), WeightSpec::legendre(), grid);
        INFO(r.family, " s=", s, " slope=", r.fitted_slope.value_or(0.0));
        CHECK(r.pass);
      }
    }
  }

  TEST_CASE("non-unit weights") {
    const std::vector<int> grid = geometric_grid(4, 128, 2);
    for (double lambda : {0.0, 1.0, 3.0}) {
      const ConvergenceReport r = run_convergence(RuleFamily::gauss, trunc_power(0.3, 1),
                                                  WeightSpec::ultraspherical(lambda), grid);
      CHECK(r.pass);
      for (const ConvergenceSample& s : r.samples) CHECK(s.bounds_hold);
    }
  }

  TEST_CASE("repeated runs are identical") {
    const std::vector<int> grid = geometric_grid(4, 256, 2);
    const ConvergenceReport a =
        run_convergence(RuleFamily::filippi, abs_power(0.3, 1), WeightSpec::legendre(), grid);
    const ConvergenceReport b =
        run_convergence(RuleFamily::filippi, abs_power(0.3, 1), WeightSpec::legendre(), grid);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].n == b.samples[i].n);
      CHECK(a.samples[i].error == b.samples[i].error);
      CHECK(a.samples[i].kernel_bound == b.samples[i].kernel_bound);
    }
    CHECK(a.fitted_slope == b.fitted_slope);
  }

  TEST_CASE("compound convergence") {
    const std::vector<int> grid = geometric_grid(4, 512, 2);
    const ConvergenceReport mid =
        run_compound_convergence(elementary_rule("midpoint"), trunc_power(0.3, 0), grid);
    CHECK(mid.expected_slope == -1.0);
    CHECK(mid.c_estimate == doctest::Approx(1.0).epsilon(1e-14));
    for (const ConvergenceSample& s : mid.samples) {
      CHECK(s.error <= 1.0 / s.n * (1 + 1e-10));
    }
    CHECK(mid.pass);

    const ConvergenceReport mid1 =
        run_compound_convergence(elementary_rule("midpoint"), trunc_power(0.3, 1), grid);
    CHECK(mid1.expected_slope == -2.0);
    CHECK(mid1.pass);

    const ConvergenceReport simp =
        run_compound_convergence(elementary_rule("simpson"), abs_power(0.3, 3), grid);
    CHECK(simp.expected_slope == -4.0);
    CHECK(simp.pass);

    for (const char* name : {"midpoint", "trapezoid", "simpson", "gauss2"}) {
      const QuadratureRule el = elementary_rule(name);
      for (int s = 0; s <= el.declared_exactness(); ++s) {
        const ConvergenceReport r = run_compound_convergence(el, trunc_power(0.3, s), grid);
        INFO(name, " s=", s);
        CHECK(r.pass);
      }
    }
  }

  TEST_CASE("preconditions") {
    const std::vector<int> grid = default_grid();
    CHECK(thrown_kind([&] {
            run_convergence(RuleFamily::gauss, trunc_power(0.3, 3), WeightSpec::legendre(),
                            std::vector<int>{1, 2, 4, 8});
          }) == ErrorKind::precondition_violation);
    CHECK(thrown_kind([&] {
            run_convergence(RuleFamily::gauss, trunc_power(0.3, 1), WeightSpec::legendre(),
                            std::vector<int>{8, 4});
          }) == ErrorKind::invalid_argument);
    CHECK(thrown_kind([&] {
            run_convergence(RuleFamily::gauss, trunc_power(0.3, 1), WeightSpec::legendre(), grid,
                            FitWindow{6, 9});
          }) == ErrorKind::invalid_argument);
    CHECK(thrown_kind([&] {
            run_compound_convergence(elementary_rule("midpoint"), trunc_power(0.3, 2), grid);
          }) == ErrorKind::precondition_violation);
    CHECK(thrown_kind([&] {
            run_compound_convergence(elementary_rule("midpoint"), smooth_control(), grid);
          }) == ErrorKind::precondition_violation);
    CHECK(thrown_kind([&] {
            run_convergence(RuleFamily::compound, trunc_power(0.3, 1), WeightSpec::legendre(),
                            grid);
          }) == ErrorKind::invalid_argument);
  }
}
