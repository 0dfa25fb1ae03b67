#include "reflectbench/verify/meteor.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace reflectbench {

namespace {

// Decodes one UTF-8 code point; malformed bytes come back as U+FFFD.
char32_t next_code_point(std::string_view s, size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  int len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else if (b0 >= 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if (b0 >= 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if (b0 >= 0x80) {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    i = s.size();
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;         // Latin-1
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 && c != 0x138 && c != 0x149 &&
      c != 0x17F) {
    // Latin Extended-A alternates upper/lower, with a parity shift at 0x139.
    const bool shifted = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    const bool upper = shifted ? (c % 2 == 1) : (c % 2 == 0);
    return upper ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;  // Greek
  if (c >= 0x410 && c <= 0x42F) return c + 32;                // Cyrillic
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool is_cjk(char32_t c) {
  return (c >= 0x3040 && c <= 0x30FF) ||   // kana
         (c >= 0x3400 && c <= 0x4DBF) ||   // CJK extension A
         (c >= 0x4E00 && c <= 0x9FFF) ||   // CJK unified
         (c >= 0xF900 && c <= 0xFAFF) ||   // compatibility ideographs
         (c >= 0x20000 && c <= 0x2FFFF);
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return std::isalnum(static_cast<int>(c)) != 0;
  if (c == 0xD7 || c == 0xF7 || c == 0xFFFD) return false;
  if (c >= 0x80 && c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;  // Latin-1 punctuation
  if (c >= 0x2000 && c <= 0x2BFF) return false;                            // punctuation, symbols
  if (c >= 0x3000 && c <= 0x303F) return false;                            // CJK punctuation
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF0F) return false;                            // fullwidth punctuation
  if (c >= 0xFF1A && c <= 0xFF20) return false;
  if (c == 0x060C || c == 0x061B || c == 0x061F || c == 0x06D4) return false;  // Arabic punctuation
  if (c == 0x0964 || c == 0x0965) return false;                                // Devanagari danda
  if (c == 0x05BE || c == 0x05C0 || c == 0x05C3 || c == 0x05F3 || c == 0x05F4) return false;
  return true;
}

bool is_mid_char(char32_t c) { return c == '\'' || c == '.' || c == 0x2019; }

}  // namespace

std::vector<std::string> meteor_tokenize(std::string_view text) {
  std::vector<char32_t> cps;
  for (size_t i = 0; i < text.size();) cps.push_back(to_lower(next_code_point(text, i)));

  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (is_cjk(c)) {
      flush();
      append_utf8(current, c);
      flush();
    } else if (is_word_char(c)) {
      append_utf8(current, c);
    } else if (is_mid_char(c) && !current.empty() && i + 1 < cps.size() &&
               is_word_char(cps[i + 1]) && !is_cjk(cps[i + 1])) {
      append_utf8(current, c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string suffix_stem(const std::string& word) {
  static const char* const kSuffixes[] = {"ations", "ation", "ments", "ment", "ness", "ings",
                                          "ing",    "edly",  "ies",   "ied",  "ers",  "est",
                                          "ed",     "er",    "es",    "ly",   "s"};
  for (const char* suffix : kSuffixes) {
    const std::string_view sfx(suffix);
    if (word.size() >= sfx.size() + 3 &&
        word.compare(word.size() - sfx.size(), sfx.size(), sfx) == 0) {
      return word.substr(0, word.size() - sfx.size());
    }
  }
  return word;
}

MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference,
                             const MeteorOptions& options) {
  MeteorAlignment a;
  a.candidate_len = candidate.size();
  a.reference_len = reference.size();
  a.mapping.assign(candidate.size(), -1);
  std::vector<bool> used(reference.size(), false);

  using Matcher = std::function<bool(const std::string&, const std::string&)>;
  std::vector<Matcher> stages;
  stages.push_back([](const std::string& c, const std::string& r) { return c == r; });
  if (options.use_stem_stage && options.stemmer) {
    stages.push_back([&](const std::string& c, const std::string& r) {
      return options.stemmer(c) == options.stemmer(r);
    });
  }
  if (!options.synonyms.empty()) {
    stages.push_back([&](const std::string& c, const std::string& r) {
      auto it = options.synonyms.find(c);
      if (it != options.synonyms.end() && it->second.count(r)) return true;
      it = options.synonyms.find(r);
      return it != options.synonyms.end() && it->second.count(c) != 0;
    });
  }

  for (const auto& matches : stages) {
    for (size_t i = 0; i < candidate.size(); ++i) {
      if (a.mapping[i] >= 0) continue;
      long chosen = -1;
      if (i > 0 && a.mapping[i - 1] >= 0) {
        const auto next = static_cast<size_t>(a.mapping[i - 1] + 1);
        if (next < reference.size() && !used[next] && matches(candidate[i], reference[next])) {
          chosen = static_cast<long>(next);
        }
      }
      for (size_t j = 0; chosen < 0 && j < reference.size(); ++j) {
        if (!used[j] && matches(candidate[i], reference[j])) chosen = static_cast<long>(j);
      }
      if (chosen >= 0) {
        a.mapping[i] = chosen;
        used[static_cast<size_t>(chosen)] = true;
      }
    }
  }

  for (size_t i = 0; i < candidate.size(); ++i) {
    if (a.mapping[i] < 0) continue;
    ++a.matches;
    const bool continues = i > 0 && a.mapping[i - 1] >= 0 && a.mapping[i] == a.mapping[i - 1] + 1;
    if (!continues) ++a.chunks;
  }
  return a;
}

double meteor_from_counts(size_t matches, size_t chunks, size_t candidate_len,
                          size_t reference_len, const MeteorOptions& options) {
  if (matches == 0 || candidate_len == 0 || reference_len == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(candidate_len);
  const double recall = m / static_cast<double>(reference_len);
  const double f_mean =
      precision * recall / (options.alpha * precision + (1.0 - options.alpha) * recall);
  const double penalty =
      options.gamma * std::pow(static_cast<double>(chunks) / m, options.beta);
  return f_mean * (1.0 - penalty);
}

double meteor(std::string_view candidate, std::string_view reference, const MeteorOptions& options) {
  const auto a = meteor_align(meteor_tokenize(candidate), meteor_tokenize(reference), options);
  return meteor_from_counts(a.matches, a.chunks, a.candidate_len, a.reference_len, options);
}

VerdictRecord score_translation(std::string_view candidate_text, std::string_view reference,
                                double pass_threshold, const MeteorOptions& options) {
  const auto translation = extract_tagged(candidate_text, "translation");
  if (!translation) return VerdictRecord::extraction_failed("no <translation> tags");
  const double score = meteor(*translation, reference, options);
  char detail[64];
  std::snprintf(detail, sizeof(detail), "meteor=%.6f", score);
  return {score, score >= pass_threshold, VerdictMethod::kMeteor, detail};
}

}  // namespace reflectbench
