#include "bvquad/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "bvquad/error.hpp"
#include "bvquad/peano.hpp"

namespace bvquad {
namespace {

// Rules and kernel profiles are pure functions of their keys; sweeps over
// several integrands reuse them.
class Memo {
 public:
  using RuleKey = std::tuple<RuleFamily, std::string, int>;
  using ProfileKey = std::tuple<RuleFamily, std::string, int, int>;

  std::shared_ptr<const QuadratureRule> rule(RuleFamily family, const WeightSpec& weight, int n) {
    const RuleKey key{family, weight.descriptor(), n};
    {
      std::lock_guard lock(mutex_);
      if (auto it = rules_.find(key); it != rules_.end()) return it->second;
    }
    auto built = std::make_shared<const QuadratureRule>(make_family_rule(family, weight, n));
    std::lock_guard lock(mutex_);
    return rules_.emplace(key, std::move(built)).first->second;
  }

  PeanoProfile profile(RuleFamily family, const WeightSpec& weight, int n,
                       const QuadratureRule& rule, int s) {
    const ProfileKey key{family, weight.descriptor(), n, s};
    {
      std::lock_guard lock(mutex_);
      if (auto it = profiles_.find(key); it != profiles_.end()) return it->second;
    }
    PeanoProfile p = kernel_sup_norm(rule, s);
    std::lock_guard lock(mutex_);
    return profiles_.emplace(key, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<RuleKey, std::shared_ptr<const QuadratureRule>> rules_;
  std::map<ProfileKey, PeanoProfile> profiles_;
};

Memo& memo() {
  static Memo instance;
  return instance;
}

// Runs body(i) for i < count on up to hardware_concurrency threads. Results
// are written by index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

void validate_grid(std::span<const int> n_grid) {
  if (n_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "n grid must be positive and strictly increasing");
    }
  }
}

void finish(ConvergenceReport& report, std::span<const int> n_grid,
            std::optional<FitWindow> fit_window, std::optional<int> s) {
  const FitWindow window = fit_window.value_or(default_fit_window(n_grid.size()));
  if (window.first >= window.last || window.last > n_grid.size() ||
      window.last - window.first < std::min<std::size_t>(4, n_grid.size())) {
    throw Error(ErrorKind::invalid_argument,
                "fit window must select at least four grid points (or the whole grid)");
  }
  std::vector<ConvergencePoint> points;
  for (std::size_t i = window.first; i < window.last; ++i) {
    points.push_back({report.samples[i].n, report.samples[i].error});
  }
  const bool all_noise = std::all_of(points.begin(), points.end(),
                                     [](const ConvergencePoint& p) { return p.error < noise_floor; });
  report.all_noise = all_noise;
  if (!all_noise) {
    try {
      report.fitted_slope = fit_slope(points);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_data) throw;
    }
  }
  if (s) report.expected_slope = -(*s + 1.0);

  const bool bounds = std::all_of(report.samples.begin(), report.samples.end(),
                                  [](const ConvergenceSample& x) { return x.bounds_hold; });
  bool slope_ok = true;
  if (report.fitted_slope && report.expected_slope) {
    slope_ok = *report.fitted_slope <= *report.expected_slope + slope_tolerance;
  }
  report.pass = bounds && slope_ok;
}

double evaluation_slack(const QuadratureRule& rule, const TestFunction& f, double exact,
                        bool oracle) {
  double magnitude = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    magnitude += std::abs(rule.weights()[j] * f(rule.nodes()[j]));
  }
  double slack = 8.0 * std::numeric_limits<double>::epsilon() * (magnitude + std::abs(exact));
  if (oracle) slack += 1e-13 * std::abs(exact);
  return slack;
}

}  // namespace

double fit_slope(std::span<const ConvergencePoint> points) {
  std::vector<std::pair<double, double>> xy;
  for (const ConvergencePoint& p : points) {
    if (p.n > 0 && p.error >= noise_floor) xy.emplace_back(std::log(p.n), std::log(p.error));
  }
  if (xy.size() < 2) {
    throw Error(ErrorKind::insufficient_data,
                "slope fit needs two points above the noise floor");
  }
  double mx = 0.0;
  double my = 0.0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= xy.size();
  my /= xy.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (auto [x, y] : xy) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0.0) throw Error(ErrorKind::insufficient_data, "slope fit needs distinct n");
  return sxy / sxx;
}

FitWindow default_fit_window(std::size_t grid_size) { return {0, grid_size}; }

std::vector<int> geometric_grid(int n_min, int n_max, int ratio) {
  if (n_min < 1 || n_max < n_min || ratio < 2) {
    throw Error(ErrorKind::invalid_argument, "grid needs 1 <= n_min <= n_max and ratio >= 2");
  }
  std::vector<int> grid;
  for (long long n = n_min; n <= n_max; n *= ratio) grid.push_back(static_cast<int>(n));
  return grid;
}

std::vector<int> default_grid() { return geometric_grid(4, 1024, 2); }

ConvergenceReport run_convergence(RuleFamily family, const TestFunction& f,
                                  const WeightSpec& weight, std::span<const int> n_grid,
                                  std::optional<FitWindow> fit_window) {
  validate_grid(n_grid);
  if (family == RuleFamily::compound || family == RuleFamily::custom) {
    throw Error(ErrorKind::invalid_argument, "use run_compound_convergence for compound rules");
  }

  ConvergenceReport report;
  report.family = std::string(to_string(family));
  report.function = f.name();
  report.weight = weight;
  report.samples.resize(n_grid.size());

  const IntegralValue exact = f.exact_integral(weight);
  parallel_for(n_grid.size(), [&](std::size_t i) {
    const int n = n_grid[i];
    const auto rule = memo().rule(family, weight, n);
    if (f.s() && *f.s() > rule->declared_exactness()) {
      throw Error(ErrorKind::precondition_violation,
                  f.name() + " needs exactness " + std::to_string(*f.s()) + " but the " +
                      report.family + " rule with n = " + std::to_string(n) + " has " +
                      std::to_string(rule->declared_exactness()));
    }
    ConvergenceSample& sample = report.samples[i];
    sample.n = n;
    sample.nodes = rule->size();
    sample.error = std::abs(exact.value - apply(*rule, f.evaluator()));
    if (f.s() && f.variation()) {
      const PeanoProfile profile = memo().profile(family, weight, n, *rule, *f.s());
      try {
        const BoundCheck check = error_bound_check(*rule, f, profile);
        sample.kernel_bound = check.kernel_bound;
        sample.freud_bound = check.freud_bound;
      } catch (const BoundViolation& v) {
        sample.kernel_bound = v.kernel_bound;
        if (std::isfinite(v.freud_bound)) sample.freud_bound = v.freud_bound;
        sample.bounds_hold = false;
      }
    }
  });

  finish(report, n_grid, fit_window, f.s());
  return report;
}

ConvergenceReport run_compound_convergence(const QuadratureRule& elementary,
                                           const TestFunction& f, std::span<const int> n_grid,
                                           std::optional<FitWindow> fit_window,
                                           const std::string& label) {
  validate_grid(n_grid);
  if (!elementary.weight().is_unit()) {
    throw Error(ErrorKind::weight_mismatch, "compound convergence needs the legendre weight");
  }
  if (!f.s() || !f.variation()) {
    throw Error(ErrorKind::precondition_violation, "compound convergence needs f in some V_s");
  }
  const int s = *f.s();
  if (s > elementary.declared_exactness()) {
    throw Error(ErrorKind::precondition_violation,
                "s exceeds the exactness degree of the elementary rule");
  }

  ConvergenceReport report;
  report.family = label;
  report.function = f.name();
  report.weight = elementary.weight();
  report.samples.resize(n_grid.size());
  const double c_estimate = kernel_sup_norm(elementary, s).sup_norm;
  report.c_estimate = c_estimate;

  const IntegralValue exact = f.exact_integral(elementary.weight());
  parallel_for(n_grid.size(), [&](std::size_t i) {
    const int n = n_grid[i];
    const QuadratureRule rule = compound_rule(elementary, n);
    ConvergenceSample& sample = report.samples[i];
    sample.n = n;
    sample.nodes = rule.size();
    sample.error = std::abs(exact.value - apply(rule, f.evaluator()));
    const double bound = c_estimate * std::pow(static_cast<double>(n), -(s + 1)) * *f.variation();
    sample.kernel_bound = bound;
    sample.bounds_hold = sample.error <= bound * (1.0 + 1e-10) +
                                             evaluation_slack(rule, f, exact.value,
                                                              exact.oracle_computed);
  });

  finish(report, n_grid, fit_window, s);
  return report;
}

}  // namespace bvquad
