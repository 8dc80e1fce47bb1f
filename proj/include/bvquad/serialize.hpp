#pragma once

#include <string>
#include <vector>

#include "bvquad/corpus.hpp"
#include "bvquad/peano.hpp"
#include "bvquad/rules.hpp"
#include "bvquad/runner.hpp"

// Text formats shared by the CLI and the tests. Every real number is written
// with 17 significant digits ("%.17g"), which round-trips doubles exactly;
// non-finite values and absent optionals are written as null (JSON) or an
// empty field (CSV).

namespace bvquad {

std::string format_double(double v);

/// {"weight": {...}, "family": str, "nodes": [...], "weights": [...],
///  "declared_exactness": int}. Compound rules also carry "copies" and the
/// "elementary" rule record so that a reload rebuilds the same rule; rules
/// with double-double low parts (the elementary rules) add "nodes_lo" and
/// "weights_lo".
std::string rule_to_json(const QuadratureRule& rule);

/// Inverse of rule_to_json. Throws ErrorKind::invalid_argument on malformed
/// input and ErrorKind::invalid_rule when the record violates rule invariants.
QuadratureRule rule_from_json(const std::string& text);

/// {"s", "sup_norm", "argmax_t", "freud_bound", "ratio", "n", "family"}.
std::string profile_to_json(const PeanoProfile& profile);

inline constexpr const char* report_csv_header =
    "family,function,weight,n,error,kernel_bound,freud_bound";

/// Header line plus one row per sample.
std::string report_to_csv(const ConvergenceReport& report);

/// {"family", "function", "weight", "fitted_slope", "expected_slope", "pass",
///  "all_noise", "c_estimate", "samples": [...]}.
std::string report_to_json(const ConvergenceReport& report);

/// Name, s, variation, singularity and closed-form integral of each function.
std::string corpus_manifest_json(const std::vector<TestFunction>& corpus);

/// Writes `content` to a temporary file next to `path` and renames it over
/// `path`. Throws ErrorKind::invalid_argument if the file cannot be written.
void write_file_atomic(const std::string& path, const std::string& content);

/// Log-log plot of error against n with the reference slope -(s+1).
std::string report_to_svg(const ConvergenceReport& report);

}  // namespace bvquad
