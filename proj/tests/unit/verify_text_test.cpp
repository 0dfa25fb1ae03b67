#include <gtest/gtest.h>

#include "reflectbench/verify/meteor.hpp"
#include "reflectbench/verify/scoring.hpp"
#include "reflectbench/verify/sql.hpp"
#include "test_support.hpp"

using namespace reflectbench;

TEST(ExtractTagged, LastPairCaseInsensitive) {
  EXPECT_EQ(extract_tagged("<a>1</a><A> 2 </A>", "a"), "2");
  EXPECT_FALSE(extract_tagged("<a>1", "a").has_value());
  EXPECT_FALSE(extract_tagged("nothing", "a").has_value());
}

TEST(Sentiment, TagMatch) {
  auto v = score_sentiment("<sentiment> Positive </sentiment>", "positive");
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.method, VerdictMethod::kTagMatch);
  EXPECT_FALSE(score_sentiment("<sentiment>negative</sentiment>", "positive").pass);
  EXPECT_EQ(score_sentiment("positive", "positive").method, VerdictMethod::kExtractionFailed);
}

TEST(MeteorTokenize, WordsAndCjk) {
  EXPECT_EQ(meteor_tokenize("Hello, World! It's 3.5 km."),
            (std::vector<std::string>{"hello", "world", "it's", "3.5", "km"}));
  EXPECT_EQ(meteor_tokenize("\xE6\x97\xA5\xE6\x9C\xAC"),  // two ideographs
            (std::vector<std::string>{"\xE6\x97\xA5", "\xE6\x9C\xAC"}));
  EXPECT_TRUE(meteor_tokenize("  ...  ").empty());
}

TEST(MeteorAlign, ChunksAndMapping) {
  const auto a = meteor_align({"the", "cat", "sat"}, {"the", "cat", "sat"});
  EXPECT_EQ(a.matches, 3u);
  EXPECT_EQ(a.chunks, 1u);
  const auto b = meteor_align({"sat", "the", "cat"}, {"the", "cat", "sat"});
  EXPECT_EQ(b.matches, 3u);
  EXPECT_EQ(b.chunks, 2u);
  EXPECT_EQ(b.mapping, (std::vector<long>{2, 0, 1}));
  const auto c = meteor_align({"dog"}, {"cat"});
  EXPECT_EQ(c.matches, 0u);
  EXPECT_EQ(c.mapping, (std::vector<long>{-1}));
}

TEST(MeteorAlign, StemStage) {
  const auto a = meteor_align({"walking"}, {"walked"});
  EXPECT_EQ(a.matches, 1u);
  MeteorOptions exact_only;
  exact_only.use_stem_stage = false;
  EXPECT_EQ(meteor_align({"walking"}, {"walked"}, exact_only).matches, 0u);
}

TEST(MeteorAlign, SynonymStage) {
  MeteorOptions o;
  o.synonyms["big"] = {"large"};
  EXPECT_EQ(meteor_align({"big"}, {"large"}, o).matches, 1u);
  EXPECT_EQ(meteor_align({"big"}, {"large"}).matches, 0u);
}

TEST(Meteor, FormulaValues) {
  // 10 tokens, one chunk: F = 1, penalty = 0.5 * 0.1^3.
  EXPECT_NEAR(meteor_from_counts(10, 1, 10, 10), 0.9995, 1e-12);
  EXPECT_DOUBLE_EQ(meteor_from_counts(0, 0, 5, 5), 0.0);
  // P = 1, R = 0.5: F = 10*0.5/(0.5+9) = 0.526315...
  EXPECT_NEAR(meteor_from_counts(2, 1, 2, 4), (10.0 * 0.5 / 9.5) * (1 - 0.5 * 0.125), 1e-12);
  EXPECT_NEAR(meteor("a b c d e f g h i j", "a b c d e f g h i j"), 0.9995, 1e-12);
  EXPECT_DOUBLE_EQ(meteor("", "a b"), 0.0);
}

TEST(Meteor, TranslationVerdict) {
  const auto v = score_translation("<translation>the cat sat on the mat</translation>",
                                   "the cat sat on the mat");
  EXPECT_EQ(v.method, VerdictMethod::kMeteor);
  EXPECT_TRUE(v.pass);
  EXPECT_GT(v.score, 0.9);
  EXPECT_FALSE(score_translation("<translation>dog</translation>", "the cat sat on the mat").pass);
  EXPECT_EQ(score_translation("no tags", "x").method, VerdictMethod::kExtractionFailed);
  EXPECT_TRUE(score_translation("<translation>a b</translation>", "a b c", 0.3).pass);
}

TEST(ScoreResponse, DispatchesByTask) {
  Sample math{"m", TaskKind::kMathReasoning, MathInput{"p"}, "7"};
  EXPECT_TRUE(score_response(math, "<answer>7</answer>").pass);
  Sample senti{"s", TaskKind::kSentiment, SentimentInput{"r"}, "negative"};
  EXPECT_TRUE(score_response(senti, "<sentiment>negative</sentiment>").pass);
  Sample tr{"t", TaskKind::kTranslation, TranslationInput{"Hallo", "English", "German"}, "hello"};
  EXPECT_TRUE(score_response(tr, "<translation>hello</translation>").pass);
  const auto root = testutil::make_temp_dir("rb-score");
  const auto db = testutil::build_sql_fixture(root);
  Sample sql{"q", TaskKind::kTextToSql, TextToSqlInput{"q", "concert_singer", db.string(), {}},
             "SELECT count(*) FROM singer"};
  EXPECT_TRUE(score_response(sql, "<SQL>SELECT COUNT(*) FROM singer</SQL>").pass);
  std::filesystem::remove_all(root);
}
