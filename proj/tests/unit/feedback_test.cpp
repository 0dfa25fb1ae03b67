#include <gtest/gtest.h>

#include "reflectbench/feedback/feedback.hpp"
#include "reflectbench/provider/mock.hpp"
#include "reflectbench/verify/sql.hpp"
#include "test_support.hpp"

using namespace reflectbench;

class SqlFeedback : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new std::filesystem::path(testutil::make_temp_dir("rb-feedback"));
    db_path_ = new std::filesystem::path(testutil::build_sql_fixture(*root_));
  }
  static void TearDownTestSuite() {
    std::filesystem::remove_all(*root_);
    delete root_;
    delete db_path_;
  }
  static std::filesystem::path* root_;
  static std::filesystem::path* db_path_;
};
std::filesystem::path* SqlFeedback::root_ = nullptr;
std::filesystem::path* SqlFeedback::db_path_ = nullptr;

TEST_F(SqlFeedback, SuccessSerializesTable) {
  const Database db = Database::open_read_only(*db_path_);
  const auto r = sql_execution_feedback("SELECT count(*) AS n FROM singer", db);
  EXPECT_EQ(r.mechanism, FeedbackKind::kSqlExecution);
  EXPECT_EQ(r.text.rfind("Query result:\n", 0), 0u);
  EXPECT_NE(r.text.find("n"), std::string::npos);
  EXPECT_EQ(r.usage, TokenUsage{});
  EXPECT_GE(r.latency_s, 0.0);
}

TEST_F(SqlFeedback, FailureCarriesEngineMessage) {
  const Database db = Database::open_read_only(*db_path_);
  const auto r = sql_execution_feedback("SELECT nope FROM singer", db);
  EXPECT_EQ(r.text.rfind("Query failed: ", 0), 0u);
  EXPECT_NE(r.text.find("nope"), std::string::npos);
}

TEST_F(SqlFeedback, RowsAreCapped) {
  const Database db = Database::open_read_only(*db_path_);
  const auto r = sql_execution_feedback("SELECT * FROM ticket", db);
  // header + 20 rows + truncation note
  size_t lines = 0;
  for (char c : r.text.substr(std::string("Query result:\n").size())) lines += c == '\n';
  EXPECT_LE(lines, kFeedbackRowCap + 2);
  EXPECT_GE(lines, kFeedbackRowCap);
}

TEST_F(SqlFeedback, NeverWritesToDatabase) {
  const std::string before = file_digest(*db_path_);
  {
    const Database db = Database::open_read_only(*db_path_);
    sql_execution_feedback("DELETE FROM singer", db);
    sql_execution_feedback("DROP TABLE singer", db);
    sql_execution_feedback("INSERT INTO stadium VALUES (99, 'x', 'y', 1, 1, 1, 1)", db);
  }
  EXPECT_EQ(file_digest(*db_path_), before);
}

TEST(JudgeFeedback, ReturnsWholeResponse) {
  MockScript script;
  script.default_replies = {{"INCORRECT\nThe sum is wrong."}};
  MockProvider judge(script);
  const auto r = judge_feedback("What is 3+4?", "<answer>6</answer>", judge);
  EXPECT_EQ(r.text, "INCORRECT\nThe sum is wrong.");
  EXPECT_EQ(r.mechanism, FeedbackKind::kLlmJudge);
  EXPECT_GT(r.usage.input_tokens, 0);
  EXPECT_TRUE(r.usage_estimated);
  EXPECT_GT(r.latency_s, 0.0);
}

TEST(JudgeFeedback, ProviderErrorPropagates) {
  MockScript script;
  script.supports_thinking = false;
  MockProvider judge(script);
  GenerationParams params;
  params.max_tokens = 4096;
  params.thinking_budget = 1024;
  EXPECT_THROW(judge_feedback("q", "a", judge, params), ProviderError);
}
