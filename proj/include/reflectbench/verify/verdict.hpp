#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace reflectbench {

enum class VerdictMethod {
  kStringMatch,
  kSymbolicEquiv,
  kExecMatch,
  kPartialCredit,
  kTagMatch,
  kMeteor,
  kExtractionFailed,
};

std::string_view verdict_method_name(VerdictMethod method);
VerdictMethod parse_verdict_method(std::string_view name);

struct VerdictRecord {
  double score = 0.0;  // in [0, 1]
  bool pass = false;
  VerdictMethod method = VerdictMethod::kExtractionFailed;
  std::string detail;

  static VerdictRecord extraction_failed(std::string detail) {
    return {0.0, false, VerdictMethod::kExtractionFailed, std::move(detail)};
  }
};

// Content of the last well-formed <tag>...</tag> pair, whitespace-trimmed.
// Tag names match case-insensitively. nullopt when there is no pair.
std::optional<std::string> extract_tagged(std::string_view text, std::string_view tag);

std::string trim(std::string_view s);

}  // namespace reflectbench
