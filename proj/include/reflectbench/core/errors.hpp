#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reflectbench {

enum class ErrorCode {
  kMissingField,
  kValidation,
  kParse,
  kMissingDatabase,
  kDataset,
  kMissingPrice,
  kEmptyInput,
  kZeroBaseline,
  kRaggedInput,
  kDegenerateInput,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Base error for everything the harness raises outside the provider layer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reflectbench
