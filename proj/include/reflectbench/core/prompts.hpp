#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflectbench/core/types.hpp"

namespace reflectbench {

enum class TemplateId {
  kTranslation,
  kMath,
  kTextToSql,
  kSentiment,
  kReflection,
  kJudge,
};

std::string_view template_file_name(TemplateId id);

// Substitutes every `{name}` in `text` with `values[name]`. Braces that do
// not enclose a known identifier are copied through untouched. Throws
// Error(kMissingField) when a placeholder has no value.
std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values);

// Names of all `{identifier}` placeholders in order of first appearance.
std::vector<std::string> template_placeholders(std::string_view text);

// The set of prompt templates used by a run. Defaults are the resource files
// under resources/prompts compiled into the binary; a directory override lets
// a run pin a different revision without rebuilding.
class PromptTemplates {
 public:
  PromptTemplates();

  // Files missing from `dir` fall back to the built-in text.
  static PromptTemplates from_directory(const std::filesystem::path& dir);

  const std::string& text(TemplateId id) const;
  void set_text(TemplateId id, std::string text);

  // Value of `{current_date}` in the text-to-SQL template.
  const std::string& current_date() const { return current_date_; }
  void set_current_date(std::string date) { current_date_ = std::move(date); }

 private:
  std::map<TemplateId, std::string> texts_;
  std::string current_date_;
};

// Renders the schema block as one CREATE TABLE statement per table, in the
// order given.
std::string render_schema_ddl(const std::vector<TableSchema>& schema);

// The round-0 user message for `sample`. Throws Error(kMissingField) when a
// payload element the template needs is empty.
Message build_initial_prompt(const Sample& sample,
                             const PromptTemplates& templates = PromptTemplates());

// The self-reflection user message. `feedback_output` fills the feedback
// slot; absent means an empty slot.
Message build_reflection_prompt(std::string_view first_user_message,
                                const std::optional<std::string>& feedback_output,
                                const PromptTemplates& templates = PromptTemplates());

// The judge request asking for a CORRECT / INCORRECT verdict on `candidate`.
Message build_judge_prompt(std::string_view user_query, std::string_view candidate,
                           const PromptTemplates& templates = PromptTemplates());

}  // namespace reflectbench
