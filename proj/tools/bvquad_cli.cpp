// bvquad command-line front end.
//
// Exit codes: 0 success, 1 construction or analysis failure, 2 usage error,
// 3 a bound, slope or Freud assertion failed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvquad/corpus.hpp"
#include "bvquad/error.hpp"
#include "bvquad/peano.hpp"
#include "bvquad/rules.hpp"
#include "bvquad/runner.hpp"
#include "bvquad/serialize.hpp"
#include "json.hpp"

namespace {

using namespace bvquad;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAssertion = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A family flag value: a RuleFamily or "compound:<elementary>".
struct FamilySpec {
  std::string label;
  RuleFamily family = RuleFamily::gauss;
  std::string elementary;
};

FamilySpec parse_family_spec(const std::string& text) {
  FamilySpec spec;
  spec.label = text;
  const std::string prefix = "compound:";
  if (text.rfind(prefix, 0) == 0) {
    spec.family = RuleFamily::compound;
    spec.elementary = text.substr(prefix.size());
    try {
      elementary_rule(spec.elementary);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return spec;
  }
  try {
    spec.family = parse_family(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (spec.family == RuleFamily::compound || spec.family == RuleFamily::custom) {
    throw UsageError("family '" + text + "' needs the form compound:<elementary> or --rule-file");
  }
  spec.label = std::string(to_string(spec.family));
  return spec;
}

WeightSpec parse_weight_flag(const std::string& text) {
  try {
    return parse_weight(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

TestFunction parse_function_flag(const std::string& text) {
  try {
    return parse_function(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by rule, peano and exactness.
struct RuleOptions {
  std::string family;
  std::string weight = "legendre";
  int n = 0;
  std::string rule_file;

  void add_to(CLI::App* cmd, bool allow_file) {
    cmd->add_option("--family", family, "gauss, radau_left, radau_right, cc, filippi, polya, "
                                        "kronrod or compound:<midpoint|trapezoid|simpson|gauss2>");
    cmd->add_option("--weight", weight, "legendre, chebyshev1, chebyshev2 or ultraspherical:<l>");
    cmd->add_option("--n", n, "points (Kronrod: Gauss order, compound: copies)");
    if (allow_file) cmd->add_option("--rule-file", rule_file, "rule JSON written by `rule`");
  }

  QuadratureRule build() const {
    if (!rule_file.empty()) {
      if (!family.empty()) throw UsageError("--rule-file and --family are exclusive");
      return rule_from_json(read_file(rule_file));
    }
    if (family.empty()) throw UsageError("--family (or --rule-file) is required");
    if (n < 1) throw UsageError("--n must be a positive integer");
    const FamilySpec spec = parse_family_spec(family);
    const WeightSpec w = parse_weight_flag(weight);
    if (spec.family == RuleFamily::compound) {
      return compound_rule(elementary_rule(spec.elementary), n);
    }
    return make_family_rule(spec.family, w, n);
  }
};

struct ExperimentConfig {
  std::vector<std::string> families;
  std::vector<std::string> functions;
  std::string weight = "legendre";
  int n_min = 4;
  int n_max = 1024;
  int ratio = 2;
  std::vector<int> s_list;
  std::string output_dir;
  std::vector<std::string> formats{"json", "csv", "svg"};
};

void load_config(const std::string& path, ExperimentConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
    if (j.contains("families")) cfg.families = j.at("families").get<std::vector<std::string>>();
    if (j.contains("functions")) cfg.functions = j.at("functions").get<std::vector<std::string>>();
    if (j.contains("weight")) cfg.weight = j.at("weight").get<std::string>();
    if (j.contains("n_min")) cfg.n_min = j.at("n_min").get<int>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("geometric_ratio")) cfg.ratio = j.at("geometric_ratio").get<int>();
    if (j.contains("s_list")) cfg.s_list = j.at("s_list").get<std::vector<int>>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("formats")) cfg.formats = j.at("formats").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config " + path + ": " + e.what());
  }
}

std::string file_stem(const std::string& family, const std::string& function) {
  std::string stem = family + "__" + function;
  for (char& c : stem) {
    if (c == ':' || c == '/' || c == ' ') c = '_';
  }
  return stem;
}

int cmd_rule(const RuleOptions& opts) {
  std::cout << rule_to_json(opts.build()) << "\n";
  return kExitOk;
}

int cmd_exactness(const RuleOptions& opts, int max_probe) {
  const QuadratureRule rule = opts.build();
  // No rule with N nodes is exact beyond degree 2N - 1.
  const int probe = max_probe >= 0 ? max_probe : 2 * static_cast<int>(rule.size()) + 1;
  std::cout << exactness_degree(rule, probe) << "\n";
  return kExitOk;
}

int cmd_peano(const RuleOptions& opts, int s, bool check_freud) {
  if (s < 0) throw UsageError("--s must be >= 0");
  const QuadratureRule rule = opts.build();
  const PeanoProfile profile = kernel_sup_norm(rule, s);
  std::cout << profile_to_json(profile) << "\n";
  if (!check_freud) return kExitOk;
  if (!profile.freud_bound) {
    std::cerr << "no Freud bound applies to this rule (needs positive weights and exactness "
                 ">= nodes - 1)\n";
    return kExitAssertion;
  }
  if (profile.sup_norm <= *profile.freud_bound) return kExitOk;
  std::cerr << "sup|K_s| = " << format_double(profile.sup_norm) << " exceeds Freud's bound "
            << format_double(*profile.freud_bound) << "\n";
  return kExitAssertion;
}

int cmd_converge(ExperimentConfig cfg) {
  if (cfg.families.empty()) throw UsageError("converge needs at least one --family");
  if (cfg.functions.empty()) {
    for (int s : cfg.s_list) {
      cfg.functions.push_back("truncpower:" + format_double(default_singularity) + ":" +
                              std::to_string(s));
    }
  }
  if (cfg.functions.empty()) throw UsageError("converge needs --function or --s");
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min || cfg.ratio < 2) {
    throw UsageError("grid needs 1 <= n_min <= n_max and ratio >= 2");
  }
  for (const std::string& f : cfg.formats) {
    if (f != "json" && f != "csv" && f != "svg") throw UsageError("unknown format '" + f + "'");
  }

  std::vector<FamilySpec> families;
  for (const std::string& f : cfg.families) families.push_back(parse_family_spec(f));
  std::vector<TestFunction> functions;
  for (const std::string& f : cfg.functions) functions.push_back(parse_function_flag(f));
  const WeightSpec weight = parse_weight_flag(cfg.weight);
  const std::vector<int> grid = geometric_grid(cfg.n_min, cfg.n_max, cfg.ratio);

  std::string dir = cfg.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("BVQUAD_OUTPUT_DIR");
    dir = env != nullptr && *env != '\0' ? env : "bvquad-output";
  }
  std::filesystem::create_directories(dir);

  bool all_pass = true;
  for (const FamilySpec& fam : families) {
    for (const TestFunction& f : functions) {
      const ConvergenceReport report =
          fam.family == RuleFamily::compound
              ? run_compound_convergence(elementary_rule(fam.elementary), f, grid, std::nullopt,
                                         fam.label)
              : run_convergence(fam.family, f, weight, grid);
      all_pass = all_pass && report.pass;

      const std::string stem = (std::filesystem::path(dir) / file_stem(fam.label, f.name())).string();
      for (const std::string& format : cfg.formats) {
        if (format == "json") write_file_atomic(stem + ".json", report_to_json(report) + "\n");
        if (format == "csv") write_file_atomic(stem + ".csv", report_to_csv(report));
        if (format == "svg") write_file_atomic(stem + ".svg", report_to_svg(report));
      }
      std::cout << report.family << " " << report.function
                << " slope=" << (report.fitted_slope ? format_double(*report.fitted_slope) : "null")
                << " expected="
                << (report.expected_slope ? format_double(*report.expected_slope) : "null")
                << " pass=" << (report.pass ? "true" : "false") << "\n";
    }
  }
  return all_pass ? kExitOk : kExitAssertion;
}

int run(int argc, char** argv) {
  CLI::App app{"Peano-kernel analysis of interpolatory quadrature rules"};
  app.require_subcommand(1);

  RuleOptions rule_opts;
  CLI::App* rule_cmd = app.add_subcommand("rule", "print a quadrature rule as JSON");
  rule_opts.add_to(rule_cmd, false);

  RuleOptions exact_opts;
  int max_probe = -1;
  CLI::App* exact_cmd = app.add_subcommand("exactness", "print the polynomial exactness degree");
  exact_opts.add_to(exact_cmd, true);
  exact_cmd->add_option("--max-probe", max_probe, "highest probed degree (default 2N+1)");

  RuleOptions peano_opts;
  int s = -1;
  bool check_freud = false;
  CLI::App* peano_cmd = app.add_subcommand("peano", "sup norm of the Peano kernel K_s");
  peano_opts.add_to(peano_cmd, true);
  peano_cmd->add_option("--s", s, "kernel order")->required();
  peano_cmd->add_flag("--check-freud", check_freud, "exit 3 unless sup|K_s| <= Freud's bound");

  ExperimentConfig cfg;
  std::string config_file;
  std::string families_flag;
  std::string functions_flag;
  std::string n_flag;
  std::string s_flag;
  std::string formats_flag;
  CLI::App* conv_cmd = app.add_subcommand("converge", "convergence study with bound checks");
  conv_cmd->add_option("--config", config_file, "JSON file with ExperimentConfig fields");
  auto* fam_opt = conv_cmd->add_option("--family", families_flag, "comma-separated families");
  auto* fun_opt =
      conv_cmd->add_option("--function", functions_flag, "comma-separated function descriptors");
  auto* weight_opt = conv_cmd->add_option("--weight", cfg.weight, "weight descriptor");
  auto* n_opt = conv_cmd->add_option("--n", n_flag, "n_min:n_max:ratio (default 4:1024:2)");
  auto* s_opt = conv_cmd->add_option("--s", s_flag, "comma-separated orders for truncpower:0.3:s");
  auto* dir_opt = conv_cmd->add_option("--output-dir", cfg.output_dir,
                                       "output directory (default $BVQUAD_OUTPUT_DIR)");
  auto* fmt_opt = conv_cmd->add_option("--formats", formats_flag, "subset of json,csv,svg");

  app.add_subcommand("corpus", "print the standard test-function corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (rule_cmd->parsed()) return cmd_rule(rule_opts);
  if (exact_cmd->parsed()) return cmd_exactness(exact_opts, max_probe);
  if (peano_cmd->parsed()) return cmd_peano(peano_opts, s, check_freud);
  if (app.got_subcommand("corpus")) {
    std::cout << corpus_manifest_json(standard_corpus()) << "\n";
    return kExitOk;
  }

  // converge: config file first, flags override.
  ExperimentConfig merged;
  if (!config_file.empty()) load_config(config_file, merged);
  if (fam_opt->count() > 0) merged.families = split_list(families_flag);
  if (fun_opt->count() > 0) merged.functions = split_list(functions_flag);
  if (weight_opt->count() > 0) merged.weight = cfg.weight;
  if (dir_opt->count() > 0) merged.output_dir = cfg.output_dir;
  if (fmt_opt->count() > 0) merged.formats = split_list(formats_flag);
  if (s_opt->count() > 0) {
    merged.s_list.clear();
    for (const std::string& item : split_list(s_flag)) {
      try {
        merged.s_list.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw UsageError("bad order '" + item + "'");
      }
    }
  }
  if (n_opt->count() > 0) {
    int a = 0, b = 0, r = 0;
    char tail = 0;
    if (std::sscanf(n_flag.c_str(), "%d:%d:%d%c", &a, &b, &r, &tail) != 3) {
      throw UsageError("--n expects n_min:n_max:ratio");
    }
    merged.n_min = a;
    merged.n_max = b;
    merged.ratio = r;
  }
  return cmd_converge(std::move(merged));
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n(run with --help for usage)\n";
    return kExitUsage;
  } catch (const bvquad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
