#include "bvquad/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "bvquad/error.hpp"
#include "json.hpp"

namespace bvquad {
namespace {

using nlohmann::json;

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string number_or_null(const std::optional<double>& v) {
  return v ? format_double(*v) : "null";
}

std::string array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out + "]";
}

std::string weight_json(const WeightSpec& w) {
  std::string kind;
  switch (w.kind()) {
    case WeightKind::legendre: kind = "legendre"; break;
    case WeightKind::ultraspherical: kind = "ultraspherical"; break;
    case WeightKind::chebyshev1: kind = "chebyshev1"; break;
    case WeightKind::chebyshev2: kind = "chebyshev2"; break;
  }
  return "{\"kind\": " + quote(kind) + ", \"lambda\": " + format_double(w.lambda()) +
         ", \"mass\": " + format_double(w.mass()) +
         ", \"freud_M\": " + number_or_null(w.freud_M()) + "}";
}

WeightSpec weight_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ultraspherical") return WeightSpec::ultraspherical(j.at("lambda").get<double>());
  return parse_weight(kind);
}

std::vector<double> doubles(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::invalid_argument, "expected a number array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(v.get<double>());
  return out;
}

QuadratureRule rule_from_value(const json& j) {
  const WeightSpec weight = weight_from_json(j.at("weight"));
  const RuleFamily family = parse_family(j.at("family").get<std::string>());
  if (family == RuleFamily::compound && j.contains("elementary")) {
    const QuadratureRule elementary = rule_from_value(j.at("elementary"));
    QuadratureRule rebuilt = compound_rule(elementary, j.at("copies").get<int>());
    const std::vector<double> nodes = doubles(j.at("nodes"));
    if (!std::equal(nodes.begin(), nodes.end(), rebuilt.nodes().begin(), rebuilt.nodes().end())) {
      throw Error(ErrorKind::invalid_rule,
                  "compound record nodes do not match its elementary rule and copy count");
    }
    return rebuilt;
  }
  std::vector<double> nodes = doubles(j.at("nodes"));
  std::vector<double> weights = doubles(j.at("weights"));
  std::vector<double> nodes_lo(nodes.size(), 0.0);
  std::vector<double> weights_lo(weights.size(), 0.0);
  if (j.contains("nodes_lo")) nodes_lo = doubles(j.at("nodes_lo"));
  if (j.contains("weights_lo")) weights_lo = doubles(j.at("weights_lo"));
  return {weight,
          std::move(nodes),
          std::move(weights),
          std::move(nodes_lo),
          std::move(weights_lo),
          family,
          j.at("declared_exactness").get<int>()};
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rule_to_json(const QuadratureRule& rule) {
  std::string out = "{\"weight\": " + weight_json(rule.weight()) +
                    ", \"family\": " + quote(std::string(to_string(rule.family()))) +
                    ", \"nodes\": " + array(rule.nodes()) +
                    ", \"weights\": " + array(rule.weights()) +
                    ", \"declared_exactness\": " + std::to_string(rule.declared_exactness());
  auto nonzero = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
  };
  // Elementary rules carry double-double low parts that compound rebuilds need.
  if (!rule.compound_origin() && (nonzero(rule.nodes_lo()) || nonzero(rule.weights_lo()))) {
    out += ", \"nodes_lo\": " + array(rule.nodes_lo()) +
           ", \"weights_lo\": " + array(rule.weights_lo());
  }
  if (const auto& origin = rule.compound_origin()) {
    out += ", \"copies\": " + std::to_string(origin->copies) +
           ", \"elementary\": " + rule_to_json(*origin->elementary);
  }
  return out + "}";
}

QuadratureRule rule_from_json(const std::string& text) {
  try {
    return rule_from_value(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("malformed rule record: ") + e.what());
  }
}

std::string profile_to_json(const PeanoProfile& p) {
  const double ratio = p.ratio();
  return "{\"s\": " + std::to_string(p.s) + ", \"sup_norm\": " + format_double(p.sup_norm) +
         ", \"argmax_t\": " + format_double(p.argmax_t) +
         ", \"freud_bound\": " + number_or_null(p.freud_bound) +
         ", \"ratio\": " + format_double(ratio) + ", \"n\": " + std::to_string(p.n) +
         ", \"family\": " + quote(std::string(to_string(p.family))) + "}";
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << report_csv_header << "\n";
  const std::string weight = report.weight.descriptor();
  auto field = [](const std::optional<double>& v) {
    return v && std::isfinite(*v) ? format_double(*v) : std::string();
  };
  for (const ConvergenceSample& s : report.samples) {
    out << report.family << "," << report.function << "," << weight << "," << s.n << ","
        << format_double(s.error) << "," << field(s.kernel_bound) << ","
        << field(s.freud_bound) << "\n";
  }
  return out.str();
}

std::string report_to_json(const ConvergenceReport& report) {
  std::string out = "{\"family\": " + quote(report.family) +
                    ", \"function\": " + quote(report.function) +
                    ", \"weight\": " + quote(report.weight.descriptor()) +
                    ", \"fitted_slope\": " + number_or_null(report.fitted_slope) +
                    ", \"expected_slope\": " + number_or_null(report.expected_slope) +
                    ", \"pass\": " + (report.pass ? "true" : "false") +
                    ", \"all_noise\": " + (report.all_noise ? "true" : "false") +
                    ", \"c_estimate\": " + number_or_null(report.c_estimate) + ", \"samples\": [";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const ConvergenceSample& s = report.samples[i];
    if (i > 0) out += ", ";
    out += "{\"n\": " + std::to_string(s.n) + ", \"nodes\": " + std::to_string(s.nodes) +
           ", \"error\": " + format_double(s.error) +
           ", \"kernel_bound\": " + number_or_null(s.kernel_bound) +
           ", \"freud_bound\": " + number_or_null(s.freud_bound) +
           ", \"bounds_hold\": " + (s.bounds_hold ? "true" : "false") + "}";
  }
  return out + "]}";
}

std::string corpus_manifest_json(const std::vector<TestFunction>& corpus) {
  std::string out = "[";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const TestFunction& f = corpus[i];
    if (i > 0) out += ", ";
    out += "{\"name\": " + quote(f.name()) +
           ", \"s\": " + (f.s() ? std::to_string(*f.s()) : std::string("null")) +
           ", \"variation\": " + number_or_null(f.variation()) +
           ", \"singularity\": " + number_or_null(f.singularity()) +
           ", \"integral_legendre\": " + quote(f.integral_formula()) + "}";
  }
  return out + "]";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::invalid_argument, "cannot rename " + tmp + " to " + path);
  }
}

}  // namespace bvquad
