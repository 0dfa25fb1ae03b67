#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reflectbench/verify/verdict.hpp"

namespace reflectbench {

struct LatexNormalizeOptions {
  // Trailing words dropped after a quantity ("5 cm" -> "5").
  std::vector<std::string> unit_words;

  // The list in resources/prompts/unit_words.txt.
  static LatexNormalizeOptions defaults();
};

// Canonicalises a LaTeX answer so that cosmetic variants compare equal:
// strips math delimiters, \left/\right, \text/\mbox/\boxed wrappers, thin
// spaces, whitespace, a trailing period, degree marks and unit words, maps
// \dfrac/\tfrac to \frac and unwraps one-character exponent and subscript
// groups. Constructs it does not know pass through unchanged.
std::string normalize_latex(std::string_view expr,
                            const LatexNormalizeOptions& options = LatexNormalizeOptions::defaults());

// Expression tree over the supported LaTeX subset: integers, decimals, + - * /
// (also \cdot \times \div), ^, \frac, \sqrt[n]{}, \pi, single-letter and Greek
// variables, parentheses and braces, implicit multiplication.
class MathExpr {
 public:
  enum class Kind { kNumber, kVariable, kPi, kAdd, kSub, kMul, kDiv, kPow, kNeg, kRoot };

  // nullopt when the text is outside the subset.
  static std::optional<MathExpr> parse(std::string_view latex);

  Kind kind() const;
  std::set<std::string> variables() const;
  // Exact value as "p/q" in lowest terms (q > 0) when the expression is a
  // rational constant.
  std::optional<std::string> exact_value() const;
  double evaluate(const std::vector<std::pair<std::string, double>>& assignment) const;

  struct Node;
  explicit MathExpr(std::shared_ptr<const Node> root);

 private:
  std::shared_ptr<const Node> root_;
};

struct EquivalenceOptions {
  int sample_points = 16;
  double relative_tolerance = 1e-8;
  double absolute_floor = 1e-12;
  std::uint64_t seed = 0x5eed5eedULL;
};

// True when both normalized inputs parse and denote the same value: exact
// rational comparison for rational constants, otherwise agreement at
// `sample_points` seeded random variable assignments.
bool symbolic_equivalent(std::string_view a, std::string_view b,
                         const EquivalenceOptions& options = {});

// Extracts <answer>, normalizes both sides, then tries string equality and
// symbolic equivalence in that order.
VerdictRecord score_math(std::string_view candidate_text, std::string_view gold,
                         const LatexNormalizeOptions& options = LatexNormalizeOptions::defaults());

}  // namespace reflectbench
