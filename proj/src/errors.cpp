#include "normlab/errors.hpp"

namespace normlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::enumeration_too_large: return "enumeration_too_large";
    case ErrorCode::degenerate_family: return "degenerate_family";
    case ErrorCode::degenerate_pair: return "degenerate_pair";
    case ErrorCode::not_positive_definite: return "not_positive_definite";
    case ErrorCode::differentiability_failure: return "differentiability_failure";
    case ErrorCode::certificate_stale: return "certificate_stale";
    case ErrorCode::empty_domain: return "empty_domain";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

}  // namespace normlab
