#include "bvquad/error.hpp"

namespace bvquad {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unsupported_weight: return "unsupported-weight";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::size_error: return "size-error";
    case ErrorKind::eigen_failure: return "eigen-failure";
    case ErrorKind::ill_conditioned: return "ill-conditioned";
    case ErrorKind::unsupported_lambda: return "unsupported-lambda";
    case ErrorKind::extension_failure: return "extension-failure";
    case ErrorKind::weight_mismatch: return "weight-mismatch";
    case ErrorKind::invalid_rule: return "invalid-rule";
    case ErrorKind::precondition_violation: return "precondition-violation";
    case ErrorKind::bound_violation: return "bound-violation";
    case ErrorKind::scaling_violation: return "scaling-violation";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::all_noise: return "all-noise";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace bvquad
