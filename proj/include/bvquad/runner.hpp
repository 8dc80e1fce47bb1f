#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvquad/corpus.hpp"
#include "bvquad/rules.hpp"

namespace bvquad {

inline constexpr double noise_floor = 1e-14;
inline constexpr double slope_tolerance = 0.25;

struct ConvergencePoint {
  int n = 0;
  double error = 0.0;
};

/// OLS slope of log(error) against log(n) after dropping errors below the
/// noise floor. Throws insufficient_data with fewer than two points left.
double fit_slope(std::span<const ConvergencePoint> points);

struct ConvergenceSample {
  int n = 0;              // rule parameter (points, Kronrod order or subintervals)
  std::size_t nodes = 0;  // actual node count
  double error = 0.0;
  std::optional<double> kernel_bound;
  std::optional<double> freud_bound;
  bool bounds_hold = true;
};

struct ConvergenceReport {
  std::string family;
  std::string function;
  WeightSpec weight = WeightSpec::legendre();
  std::vector<ConvergenceSample> samples;
  std::optional<double> fitted_slope;
  std::optional<double> expected_slope;
  std::optional<double> c_estimate;  // compound runs: sup|K_s| of the elementary rule
  bool all_noise = false;
  bool pass = false;
};

/// Indices [first, last) into the n grid used for the slope fit.
struct FitWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// The whole grid. Errors for a fixed singularity swing by up to a factor of
/// ten with the node phase, so short windows give unstable slopes.
FitWindow default_fit_window(std::size_t grid_size);

/// n_min, n_min*ratio, ... up to n_max.
std::vector<int> geometric_grid(int n_min, int n_max, int ratio);

/// The default grid 4, 8, ..., 1024.
std::vector<int> default_grid();

/// Sweep n for one rule family, integrand and weight. Each sample's error is
/// checked against sup|K_s(Q_n)| Var f^(s) and, for positive interpolatory
/// rules, Freud's bound; the report passes when all samples hold their bounds
/// and the fitted slope is at most -(s+1) + 0.25.
ConvergenceReport run_convergence(RuleFamily family, const TestFunction& f,
                                  const WeightSpec& weight, std::span<const int> n_grid,
                                  std::optional<FitWindow> fit_window = std::nullopt);

/// Same for n-fold compound rules of a legendre elementary rule; the per-sample
/// bound is C n^{-s-1} Var f^(s) with C = sup|K_s(elementary)|.
ConvergenceReport run_compound_convergence(const QuadratureRule& elementary,
                                           const TestFunction& f, std::span<const int> n_grid,
                                           std::optional<FitWindow> fit_window = std::nullopt,
                                           const std::string& label = "compound");

}  // namespace bvquad
