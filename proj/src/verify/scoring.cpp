#include "reflectbench/verify/scoring.hpp"

#include <algorithm>
#include <cctype>

#include "reflectbench/verify/sql.hpp"

namespace reflectbench {

VerdictRecord score_sentiment(std::string_view candidate_text, std::string_view gold_label) {
  auto label = extract_tagged(candidate_text, "sentiment");
  if (!label) return VerdictRecord::extraction_failed("no <sentiment> tags");
  auto fold = [](std::string s) {
    s = trim(s);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  const std::string got = fold(*label);
  const std::string want = fold(std::string(gold_label));
  const bool ok = got == want;
  return {ok ? 1.0 : 0.0, ok, VerdictMethod::kTagMatch, got + (ok ? " == " : " != ") + want};
}

VerdictRecord score_response(const Sample& sample, std::string_view response_text,
                             const VerifierOptions& options) {
  switch (sample.task) {
    case TaskKind::kMathReasoning: return score_math(response_text, sample.gold, options.latex);
    case TaskKind::kSentiment: return score_sentiment(response_text, sample.gold);
    case TaskKind::kTranslation:
      return score_translation(response_text, sample.gold, options.translation_pass_threshold,
                               options.meteor);
    case TaskKind::kTextToSql: {
      const auto& in = std::get<TextToSqlInput>(sample.input);
      const Database db = Database::open_read_only(in.db_path);
      return score_sql_response(response_text, sample.gold, db);
    }
  }
  return VerdictRecord::extraction_failed("unknown task");
}

}  // namespace reflectbench
