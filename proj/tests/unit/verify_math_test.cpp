#include <gtest/gtest.h>

#include <fstream>

#include "json.hpp"
#include "reflectbench/verify/math.hpp"
#include "test_support.hpp"

using namespace reflectbench;

TEST(NormalizeLatex, CosmeticVariants) {
  EXPECT_EQ(normalize_latex("$\\dfrac{3}{4}$"), "\\frac{3}{4}");
  EXPECT_EQ(normalize_latex("\\boxed{42}"), "42");
  EXPECT_EQ(normalize_latex("\\left( x+1 \\right)"), "(x+1)");
  EXPECT_EQ(normalize_latex("180^\\circ"), "180");
  EXPECT_EQ(normalize_latex("5 cm"), "5");
  EXPECT_EQ(normalize_latex("5\\text{ cm}"), "5");
  EXPECT_EQ(normalize_latex("7."), "7");
  EXPECT_EQ(normalize_latex("1\\,000"), "1000");
  EXPECT_EQ(normalize_latex("x^{2}"), "x^2");
  EXPECT_EQ(normalize_latex("x^{10}"), "x^{10}");
}

TEST(NormalizeLatex, UnitWordNeedsBoundary) {
  // "inch" must not eat the end of a variable name.
  EXPECT_EQ(normalize_latex("12 inches"), "12");
  EXPECT_EQ(normalize_latex("\\pi r"), "\\pi r");
}

TEST(NormalizeLatex, UnknownPassesThrough) {
  EXPECT_EQ(normalize_latex("\\oint_{0} f"), "\\oint_0f");
}

TEST(MathExpr, ParsesSubset) {
  for (const char* s : {"1", "-3.5", "\\frac{1}{2}", "2x+1", "x^2", "\\sqrt{2}", "\\sqrt[3]{8}",
                        "\\pi r^2", "(a+b)(a-b)", "3\\cdot 4", "6\\div 2", "\\alpha+\\beta",
                        "\\frac{\\sqrt{3}}{2}", "2^{-1}", "{x}"}) {
    EXPECT_TRUE(MathExpr::parse(s).has_value()) << s;
  }
  for (const char* s : {"", "x+", "\\frac{1}", "(1", "\\int x", "1 = 1", "\\sqrt"}) {
    EXPECT_FALSE(MathExpr::parse(s).has_value()) << s;
  }
}

TEST(MathExpr, ExactRationals) {
  EXPECT_EQ(MathExpr::parse("\\frac{6}{8}")->exact_value(), "3/4");
  EXPECT_EQ(MathExpr::parse("0.75")->exact_value(), "3/4");
  EXPECT_EQ(MathExpr::parse("2^{10}")->exact_value(), "1024/1");
  EXPECT_EQ(MathExpr::parse("-\\frac{1}{2}")->exact_value(), "-1/2");
  EXPECT_EQ(MathExpr::parse("2^{-2}")->exact_value(), "1/4");
  EXPECT_FALSE(MathExpr::parse("\\sqrt{2}")->exact_value().has_value());
  EXPECT_FALSE(MathExpr::parse("x")->exact_value().has_value());
}

TEST(MathExpr, PrecedenceAndImplicitProduct) {
  EXPECT_DOUBLE_EQ(MathExpr::parse("2+3\\cdot 4")->evaluate({}), 14.0);
  EXPECT_DOUBLE_EQ(MathExpr::parse("2^3^2")->evaluate({}), 512.0);
  EXPECT_DOUBLE_EQ(MathExpr::parse("-2^2")->evaluate({}), -4.0);
  EXPECT_DOUBLE_EQ(MathExpr::parse("2x")->evaluate({{"x", 3.0}}), 6.0);
  EXPECT_DOUBLE_EQ(MathExpr::parse("\\frac{x}{2}y")->evaluate({{"x", 4.0}, {"y", 3.0}}), 6.0);
  EXPECT_EQ(MathExpr::parse("xy+\\alpha")->variables(), (std::set<std::string>{"x", "y", "\\alpha"}));
}

TEST(SymbolicEquivalent, Basics) {
  EXPECT_TRUE(symbolic_equivalent("\\frac{1}{2}", "0.5"));
  EXPECT_TRUE(symbolic_equivalent("x^2-1", "(x-1)(x+1)"));
  EXPECT_TRUE(symbolic_equivalent("2\\sqrt{2}", "\\sqrt{8}"));
  EXPECT_FALSE(symbolic_equivalent("x", "y"));
  EXPECT_FALSE(symbolic_equivalent("0.3333", "\\frac{1}{3}"));
  EXPECT_FALSE(symbolic_equivalent("\\int x", "\\int x"));  // unparseable
}

TEST(ScoreMath, Methods) {
  auto v = score_math("so <answer>\\frac{3}{4}</answer>", "\\frac{3}{4}");
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.method, VerdictMethod::kStringMatch);
  v = score_math("<answer>0.75</answer>", "\\frac{3}{4}");
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.method, VerdictMethod::kSymbolicEquiv);
  v = score_math("<answer>0.7</answer>", "\\frac{3}{4}");
  EXPECT_FALSE(v.pass);
  EXPECT_DOUBLE_EQ(v.score, 0.0);
  v = score_math("the answer is 7", "7");
  EXPECT_EQ(v.method, VerdictMethod::kExtractionFailed);
  // The last answer block counts.
  EXPECT_TRUE(score_math("<answer>6</answer> wait <answer>7</answer>", "7").pass);
  EXPECT_TRUE(score_math("<ANSWER> 7 cm </ANSWER>", "7").pass);
}

TEST(SymbolicEquivalent, OracleSuite) {
  std::ifstream in(testutil::oracle_dir() / "math_pairs.json");
  ASSERT_TRUE(in);
  const auto pairs = nlohmann::json::parse(in);
  ASSERT_EQ(pairs.size(), 60u);
  int false_positives = 0;
  for (const auto& p : pairs) {
    const std::string a = normalize_latex(p["a"].get<std::string>());
    const std::string b = normalize_latex(p["b"].get<std::string>());
    const bool got = a == b || symbolic_equivalent(a, b);
    EXPECT_EQ(got, p["equivalent"].get<bool>()) << p.dump();
    if (got && !p["equivalent"].get<bool>()) ++false_positives;
  }
  EXPECT_EQ(false_positives, 0);
}
