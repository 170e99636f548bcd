#include "valnet/error.hpp"

namespace valnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::scope_mismatch: return "scope mismatch";
    case ErrorCode::kind_mismatch: return "kind mismatch";
    case ErrorCode::model_error: return "model error";
    case ErrorCode::invalid_value: return "invalid value";
    case ErrorCode::degenerate_valuation: return "degenerate valuation";
    case ErrorCode::duplicate_name: return "duplicate name";
    case ErrorCode::unknown_name: return "unknown name";
    case ErrorCode::missing_function: return "missing function";
    case ErrorCode::not_singleton: return "scope not singleton";
    case ErrorCode::no_containing_cluster: return "no containing cluster";
    case ErrorCode::oracle_bound_exceeded: return "oracle bound exceeded";
    case ErrorCode::stale_result: return "stale result";
  }
  return "unknown error";
}

}  // namespace valnet
