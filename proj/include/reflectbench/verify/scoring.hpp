#pragma once

#include <string_view>

#include "reflectbench/core/types.hpp"
#include "reflectbench/verify/math.hpp"
#include "reflectbench/verify/meteor.hpp"
#include "reflectbench/verify/verdict.hpp"

namespace reflectbench {

// Extracts <sentiment>, lowercases and trims it, and compares with the gold
// label.
VerdictRecord score_sentiment(std::string_view candidate_text, std::string_view gold_label);

struct VerifierOptions {
  LatexNormalizeOptions latex = LatexNormalizeOptions::defaults();
  MeteorOptions meteor;
  // Translation verdicts carry the METEOR score; pass is score >= this.
  double translation_pass_threshold = 0.5;
};

// Scores one model response against the sample's gold answer with the
// verifier for the sample's task. Text-to-SQL opens the sample's database
// read-only for the duration of the call.
VerdictRecord score_response(const Sample& sample, std::string_view response_text,
                             const VerifierOptions& options = {});

}  // namespace reflectbench
