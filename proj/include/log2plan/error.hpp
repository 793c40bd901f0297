#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace log2plan {

enum class ErrorCode {
  malformed_record,
  non_monotone_timestamp,
  missing_binding,
  unknown_variant,
  labeler_unavailable,
  invalid_labeler_output,
  provider_unavailable,
  empty_text,
  backend_unavailable,
  unplannable,
  revision_limit_exceeded,
  backend_failure,
  assist_timeout,
  no_scripted_answer,
  invalid_argument,
  io,
  schema,
};

std::string_view to_string(ErrorCode code);

// Domain error carrying a machine-readable code. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace log2plan
