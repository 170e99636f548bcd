#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace valnet {

enum class ErrorCode {
  scope_mismatch,
  kind_mismatch,
  model_error,
  invalid_value,
  degenerate_valuation,
  duplicate_name,
  unknown_name,
  missing_function,
  not_singleton,
  no_containing_cluster,
  oracle_bound_exceeded,
  stale_result,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` tells callers
// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace valnet
