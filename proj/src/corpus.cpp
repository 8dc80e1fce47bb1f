#include "bvquad/corpus.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "bvquad/error.hpp"
#include "bvquad/reference_integrator.hpp"

namespace bvquad {
namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Shortest text that reads back as v, so names stay "truncpower:0.3:2".
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::invalid_argument, "bad " + what + " '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::invalid_argument, "bad " + what + " '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

void check_singularity(double c) {
  if (!(c > -1.0 && c < 1.0)) {
    throw Error(ErrorKind::domain_error, "singularity location must lie in (-1,1)");
  }
}

}  // namespace

TestFunction::TestFunction(std::string name, std::optional<int> s,
                           std::optional<double> variation, Evaluator evaluator,
                           ClosedForm unit_integral, std::string integral_formula,
                           std::optional<double> singularity)
    : name_(std::move(name)),
      s_(s),
      variation_(variation),
      evaluator_(std::move(evaluator)),
      unit_integral_(std::move(unit_integral)),
      integral_formula_(std::move(integral_formula)),
      singularity_(singularity) {}

IntegralValue TestFunction::exact_integral(const WeightSpec& weight) const {
  if (weight.is_unit()) return {unit_integral_(), false};
  std::vector<double> breaks;
  if (singularity_) breaks.push_back(*singularity_);
  return {reference::weighted_integral(weight, evaluator_, -1.0, 1.0, breaks), true};
}

TestFunction trunc_power(double c, int s) {
  check_singularity(c);
  if (s < 0) throw Error(ErrorKind::domain_error, "trunc_power needs s >= 0");
  const double inv_fact = 1.0 / factorial(s);
  auto eval = [c, s, inv_fact](double x) {
    if (!(x > c)) return 0.0;
    return s == 0 ? 1.0 : std::pow(x - c, s) * inv_fact;
  };
  auto integral = [c, s] { return std::pow(1.0 - c, s + 1) / factorial(s + 1); };
  return {"truncpower:" + fmt(c) + ":" + std::to_string(s),
          s,
          1.0,
          eval,
          integral,
          "(1-c)^(s+1)/(s+1)! with c=" + fmt(c) + ", s=" + std::to_string(s),
          c};
}

TestFunction abs_power(double c, int k) {
  check_singularity(c);
  if (k < 1 || k % 2 == 0) {
    throw Error(ErrorKind::invalid_argument, "abs_power needs an odd order k >= 1");
  }
  auto eval = [c, k](double x) { return std::pow(std::abs(x - c), k); };
  auto integral = [c, k] {
    return (std::pow(1.0 - c, k + 1) + std::pow(1.0 + c, k + 1)) / (k + 1);
  };
  return {"abspower:" + fmt(c) + ":" + std::to_string(k),
          k,
          2.0 * factorial(k),
          eval,
          integral,
          "((1-c)^(k+1)+(1+c)^(k+1))/(k+1) with c=" + fmt(c) + ", k=" + std::to_string(k),
          c};
}

TestFunction smooth_control() {
  return {"exp",
          std::nullopt,
          std::nullopt,
          [](double x) { return std::exp(x); },
          [] { return std::exp(1.0) - std::exp(-1.0); },
          "e - 1/e",
          std::nullopt};
}

TestFunction parse_function(const std::string& descriptor) {
  if (descriptor == "exp") return smooth_control();
  const std::vector<std::string> parts = split(descriptor, ':');
  if (parts.size() == 3 && parts[0] == "truncpower") {
    return trunc_power(parse_number(parts[1], "singularity"), parse_int(parts[2], "order"));
  }
  if (parts.size() == 3 && parts[0] == "abspower") {
    return abs_power(parse_number(parts[1], "singularity"), parse_int(parts[2], "order"));
  }
  throw Error(ErrorKind::invalid_argument, "unknown function descriptor '" + descriptor + "'");
}

std::vector<TestFunction> standard_corpus() {
  std::vector<TestFunction> out;
  for (int s = 0; s <= 3; ++s) out.push_back(trunc_power(default_singularity, s));
  out.push_back(abs_power(default_singularity, 1));
  out.push_back(abs_power(default_singularity, 3));
  out.push_back(abs_power(0.0, 3));
  return out;
}

}  // namespace bvquad
