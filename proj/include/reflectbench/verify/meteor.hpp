#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reflectbench/verify/verdict.hpp"

namespace reflectbench {

// Lowercased unigrams split on Unicode word boundaries. Letters and digits
// form words (an apostrophe or period between two word characters stays
// inside the word); each CJK ideograph or kana is a word on its own.
std::vector<std::string> meteor_tokenize(std::string_view text);

using Stemmer = std::function<std::string(const std::string&)>;

// Strips the longest matching suffix from a short language-neutral list,
// keeping at least three characters of stem.
std::string suffix_stem(const std::string& word);

struct MeteorOptions {
  double alpha = 0.9;  // F_mean = P*R / (alpha*P + (1-alpha)*R)
  double beta = 3.0;
  double gamma = 0.5;
  Stemmer stemmer = suffix_stem;
  bool use_stem_stage = true;
  // Word -> synonyms. Empty disables the synonym stage.
  std::map<std::string, std::set<std::string>> synonyms;
};

struct MeteorAlignment {
  size_t candidate_len = 0;
  size_t reference_len = 0;
  size_t matches = 0;
  size_t chunks = 0;
  // reference index per candidate token, -1 when unmatched.
  std::vector<long> mapping;
};

// Exact, then stem, then synonym matching. Within a stage tokens are taken
// left to right; each one prefers the reference slot right after its
// predecessor's match, else the leftmost free slot.
MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference,
                             const MeteorOptions& options = {});

// Score from alignment counts:
//   F_mean = 10 P R / (R + 9 P), penalty = 0.5 (chunks / matches)^3,
//   score = F_mean (1 - penalty); 0 when nothing matches.
double meteor_from_counts(size_t matches, size_t chunks, size_t candidate_len,
                          size_t reference_len, const MeteorOptions& options = {});

double meteor(std::string_view candidate, std::string_view reference,
              const MeteorOptions& options = {});

// METEOR of the last <translation> block against the reference. pass is
// score >= pass_threshold.
VerdictRecord score_translation(std::string_view candidate_text, std::string_view reference,
                                double pass_threshold = 0.5, const MeteorOptions& options = {});

}  // namespace reflectbench
