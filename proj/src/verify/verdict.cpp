#include "reflectbench/verify/verdict.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

std::string_view verdict_method_name(VerdictMethod method) {
  switch (method) {
    case VerdictMethod::kStringMatch: return "string_match";
    case VerdictMethod::kSymbolicEquiv: return "symbolic_equiv";
    case VerdictMethod::kExecMatch: return "exec_match";
    case VerdictMethod::kPartialCredit: return "partial_credit";
    case VerdictMethod::kTagMatch: return "tag_match";
    case VerdictMethod::kMeteor: return "meteor";
    case VerdictMethod::kExtractionFailed: return "extraction_failed";
  }
  return "extraction_failed";
}

VerdictMethod parse_verdict_method(std::string_view name) {
  for (auto m : {VerdictMethod::kStringMatch, VerdictMethod::kSymbolicEquiv,
                 VerdictMethod::kExecMatch, VerdictMethod::kPartialCredit,
                 VerdictMethod::kTagMatch, VerdictMethod::kMeteor,
                 VerdictMethod::kExtractionFailed}) {
    if (verdict_method_name(m) == name) return m;
  }
  throw Error(ErrorCode::kParse, "unknown verdict method '" + std::string(name) + "'");
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<std::string> extract_tagged(std::string_view text, std::string_view tag) {
  const std::string haystack = lower(text);
  const std::string name = lower(tag);
  const std::string open = "<" + name + ">";
  const std::string close = "</" + name + ">";
  const size_t close_pos = haystack.rfind(close);
  if (close_pos == std::string::npos) return std::nullopt;
  const size_t open_pos = haystack.rfind(open, close_pos);
  if (open_pos == std::string::npos) return std::nullopt;
  const size_t begin = open_pos + open.size();
  if (begin > close_pos) return std::nullopt;
  return trim(text.substr(begin, close_pos - begin));
}

}  // namespace reflectbench
