#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>

namespace normlab {

enum class ErrorCode {
  dimension_mismatch,
  invalid_argument,
  enumeration_too_large,
  degenerate_family,
  degenerate_pair,
  not_positive_definite,
  differentiability_failure,
  certificate_stale,
  empty_domain,
  config_error,
};

const char* to_string(ErrorCode code);

/// Structured error carrying a machine-readable code and, where available,
/// a witness vector (e.g. the direction violating positive-definiteness).
class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  LabError(ErrorCode code, const std::string& message, Eigen::VectorXd witness)
      : std::runtime_error(message), code_(code), witness_(std::move(witness)) {}

  ErrorCode code() const { return code_; }
  const std::optional<Eigen::VectorXd>& witness() const { return witness_; }

 private:
  ErrorCode code_;
  std::optional<Eigen::VectorXd> witness_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw LabError(code, message);
}

}  // namespace normlab
