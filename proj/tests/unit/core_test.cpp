#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/prompts.hpp"
#include "reflectbench/core/types.hpp"

using namespace reflectbench;

namespace {

Sample math_sample(std::string problem) {
  return {"m1", TaskKind::kMathReasoning, MathInput{std::move(problem)}, "2"};
}

Sample sentiment_sample() {
  return {"s1", TaskKind::kSentiment, SentimentInput{"Great film."}, "positive"};
}

Sample translation_sample() {
  return {"t1", TaskKind::kTranslation, TranslationInput{"Good morning.", "German", "en"},
          "Guten Morgen."};
}

Sample sql_sample() {
  TextToSqlInput in;
  in.question = "How many singers?";
  in.db_id = "concert";
  in.db_path = "/nonexistent.sqlite";
  in.schema = {{"singer", {{"singer_id", "INTEGER"}, {"name", "TEXT"}}, ""},
               {"concert", {{"concert_id", "INTEGER"}}, ""}};
  return {"q1", TaskKind::kTextToSql, in, "SELECT count(*) FROM singer"};
}

}  // namespace

TEST(Prompts, MathTemplateAsksForAnswerTags) {
  const Message m = build_initial_prompt(math_sample("1+1?"));
  EXPECT_EQ(m.role, Role::kUser);
  EXPECT_NE(m.content.find("Make sure to always state your final answer in <answer> </answer> tags."),
            std::string::npos);
  EXPECT_NE(m.content.find("1+1?"), std::string::npos);
}

TEST(Prompts, SentimentTemplateAsksForSentimentTags) {
  const Message m = build_initial_prompt(sentiment_sample());
  EXPECT_NE(m.content.find("Please output only the sentiment in <sentiment></sentiment> XML tags."),
            std::string::npos);
  EXPECT_NE(m.content.find("Great film."), std::string::npos);
}

TEST(Prompts, TranslationSubstitutesLanguageAndSource) {
  const PromptTemplates templates;
  const Message m = build_initial_prompt(translation_sample(), templates);
  std::string expected = templates.text(TemplateId::kTranslation);
  expected.replace(expected.find("{language}"), 10, "German");
  expected.replace(expected.find("{source}"), 8, "Good morning.");
  EXPECT_EQ(m.content, expected);
}

TEST(Prompts, SqlSchemaRenderedAsDdlInOrder) {
  const Message m = build_initial_prompt(sql_sample());
  const auto singer = m.content.find("CREATE TABLE singer (");
  const auto concert = m.content.find("CREATE TABLE concert (");
  ASSERT_NE(singer, std::string::npos);
  ASSERT_NE(concert, std::string::npos);
  EXPECT_LT(singer, concert);
  EXPECT_NE(m.content.find("today's date is 16/04/2025"), std::string::npos);
  EXPECT_NE(m.content.find("Here is the question:How many singers?"), std::string::npos);
}

TEST(Prompts, CurrentDateIsConfigurable) {
  PromptTemplates templates;
  templates.set_current_date("01/01/2030");
  const Message m = build_initial_prompt(sql_sample(), templates);
  EXPECT_NE(m.content.find("today's date is 01/01/2030"), std::string::npos);
}

TEST(Prompts, NoKnownPlaceholderSurvivesRendering) {
  const PromptTemplates templates;
  for (const Sample& s : {math_sample("x"), sentiment_sample(), translation_sample(), sql_sample()}) {
    const Message m = build_initial_prompt(s, templates);
    for (const char* name : {"{problem}", "{review}", "{language}", "{source}", "{question}",
                             "{table_name_and_schema}", "{current_date}"}) {
      EXPECT_EQ(m.content.find(name), std::string::npos) << name;
    }
  }
}

TEST(Prompts, DeterministicRendering) {
  EXPECT_EQ(build_initial_prompt(sql_sample()), build_initial_prompt(sql_sample()));
}

TEST(Prompts, MissingPayloadFieldThrows) {
  try {
    build_initial_prompt(math_sample(""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingField);
  }
}

TEST(Prompts, RenderTemplateLeavesNonPlaceholderBraces) {
  EXPECT_EQ(render_template("a {x} {not a name} {}", {{"x", "1"}}), "a 1 {not a name} {}");
  EXPECT_THROW(render_template("{y}", {}), Error);
  EXPECT_EQ(template_placeholders("{b} {a} {b}"), (std::vector<std::string>{"b", "a"}));
}

TEST(Prompts, ReflectionWithoutFeedbackHasEmptySlot) {
  const Message m = build_reflection_prompt("What is 2+2?", std::nullopt);
  EXPECT_EQ(m.content,
            "Please reiterate your answer by thinking step by step, making sure to state your "
            "answer at the end of the response.\n\n\n\nAs a reminder, the original question is "
            "What is 2+2?");
}

TEST(Prompts, ReflectionEmbedsFeedbackBeforeReminder) {
  const std::string fb = "Judge: INCORRECT - wrong join";
  const Message m = build_reflection_prompt("q", fb);
  const auto at = m.content.find(fb);
  ASSERT_NE(at, std::string::npos);
  EXPECT_LT(m.content.find("reiterate"), at);
  EXPECT_LT(at, m.content.find("As a reminder, the original question is q"));
  EXPECT_TRUE(m.content.ends_with("As a reminder, the original question is q"));
  EXPECT_EQ(m, build_reflection_prompt("q", fb));
}

TEST(Prompts, JudgePromptCarriesQueryAndCandidate) {
  const Message m = build_judge_prompt("Which year?", "<SQL>SELECT 1</SQL>");
  EXPECT_NE(m.content.find("User question: Which year?"), std::string::npos);
  EXPECT_NE(m.content.find("Provided response: <SQL>SELECT 1</SQL>"), std::string::npos);
  EXPECT_NE(m.content.find("Make a binary judgment: CORRECT or INCORRECT"), std::string::npos);
}

TEST(Prompts, DirectoryOverrideReplacesOneTemplate) {
  const auto dir = std::filesystem::temp_directory_path() / "rb-prompt-override";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "math.txt") << "Solve: {problem}";
  }
  const PromptTemplates t = PromptTemplates::from_directory(dir);
  EXPECT_EQ(build_initial_prompt(math_sample("1+1"), t).content, "Solve: 1+1");
  EXPECT_EQ(t.text(TemplateId::kSentiment), PromptTemplates().text(TemplateId::kSentiment));
  std::filesystem::remove_all(dir);
}

TEST(Strategy, SqlFeedbackOnlyForTextToSql) {
  StrategyConfig s{"m", 1, FeedbackKind::kSqlExecution, std::nullopt, std::nullopt, false};
  EXPECT_FALSE(validate_strategy(s, TaskKind::kSentiment).ok());
  EXPECT_TRUE(validate_strategy(s, TaskKind::kTextToSql).ok());
}

TEST(Strategy, PlainBaselineIsValid) {
  StrategyConfig s{"m", 0, FeedbackKind::kNone, std::nullopt, std::nullopt, false};
  EXPECT_TRUE(validate_strategy(s, TaskKind::kMathReasoning).ok());
}

TEST(Strategy, ParityModeRejectsBudgetWithReflection) {
  StrategyConfig s{"m", 1, FeedbackKind::kNone, 4096, std::nullopt, false};
  EXPECT_FALSE(validate_strategy(s, TaskKind::kMathReasoning, true).ok());
  EXPECT_TRUE(validate_strategy(s, TaskKind::kMathReasoning, false).ok());
}

TEST(Strategy, ParityModeRestrictsRounds) {
  StrategyConfig s{"m", 2, FeedbackKind::kNone, std::nullopt, std::nullopt, false};
  EXPECT_FALSE(validate_strategy(s, TaskKind::kMathReasoning, true).ok());
  EXPECT_TRUE(validate_strategy(s, TaskKind::kMathReasoning, false).ok());
}

TEST(Strategy, JudgeModelRequiredExactlyWithJudgeFeedback) {
  StrategyConfig s{"m", 1, FeedbackKind::kLlmJudge, std::nullopt, std::nullopt, false};
  EXPECT_FALSE(validate_strategy(s, TaskKind::kMathReasoning).ok());
  s.judge_model_id = "j";
  EXPECT_TRUE(validate_strategy(s, TaskKind::kMathReasoning).ok());
  s.feedback = FeedbackKind::kNone;
  EXPECT_FALSE(validate_strategy(s, TaskKind::kMathReasoning).ok());
}

TEST(Strategy, EveryProblemIsListed) {
  StrategyConfig s{"", -1, FeedbackKind::kSqlExecution, 0, std::nullopt, false};
  EXPECT_GE(validate_strategy(s, TaskKind::kSentiment).problems.size(), 4u);
}

TEST(Strategy, LabelsAndKeys) {
  StrategyConfig s{"claude", 3, FeedbackKind::kLlmJudge, std::nullopt, "judge", true};
  EXPECT_EQ(s.key(), "claude/" + s.label());
  StrategyConfig b{"claude", 0, FeedbackKind::kNone, 4096, std::nullopt, false};
  EXPECT_NE(s.label(), b.label());
}

TEST(Types, TaskKindRoundTrip) {
  for (auto k : {TaskKind::kTranslation, TaskKind::kMathReasoning, TaskKind::kTextToSql,
                 TaskKind::kSentiment}) {
    EXPECT_EQ(parse_task_kind(task_kind_name(k)), k);
  }
  EXPECT_THROW(parse_task_kind("poetry"), Error);
}

TEST(Types, SampleValidation) {
  EXPECT_NO_THROW(validate_sample(math_sample("x")));
  Sample bad = math_sample("");
  bad.id = "";
  EXPECT_THROW(validate_sample(bad), Error);
}
