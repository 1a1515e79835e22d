#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sitegrid {

/// Stable machine-readable failure categories, used for exit diagnostics
/// and for tests that distinguish error paths.
enum class ErrorCode {
  missing_file,
  empty_file,
  missing_column,
  malformed_csv,
  invalid_argument,
  no_survivors,
  undefined_statistic,
  rank_deficient,
  unknown_attribute,
  unknown_strategy,
  unknown_zip,
  capacity_exceeded,
  undefined_distribution,
  invalid_config,
  io_error,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sitegrid
