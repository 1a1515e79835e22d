#include "sitegrid/error.hpp"

namespace sitegrid {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_file: return "missing_file";
    case ErrorCode::empty_file: return "empty_file";
    case ErrorCode::missing_column: return "missing_column";
    case ErrorCode::malformed_csv: return "malformed_csv";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::no_survivors: return "no_survivors";
    case ErrorCode::undefined_statistic: return "undefined_statistic";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::unknown_attribute: return "unknown_attribute";
    case ErrorCode::unknown_strategy: return "unknown_strategy";
    case ErrorCode::unknown_zip: return "unknown_zip";
    case ErrorCode::capacity_exceeded: return "capacity_exceeded";
    case ErrorCode::undefined_distribution: return "undefined_distribution";
    case ErrorCode::invalid_config: return "invalid_config";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace sitegrid
