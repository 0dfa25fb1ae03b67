#include "reflectbench/core/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/embedded_resources.hpp"

namespace reflectbench {

namespace {

constexpr TemplateId kAllTemplates[] = {
    TemplateId::kTranslation, TemplateId::kMath,       TemplateId::kTextToSql,
    TemplateId::kSentiment,   TemplateId::kReflection, TemplateId::kJudge,
};

constexpr std::string_view kDefaultSqlDate = "16/04/2025";

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

// Calls on_text / on_placeholder for each segment of a template.
template <typename TextFn, typename PlaceholderFn>
void scan_template(std::string_view text, TextFn on_text, PlaceholderFn on_placeholder) {
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t open = text.find('{', pos);
    if (open == std::string_view::npos) {
      on_text(text.substr(pos));
      return;
    }
    const size_t close = text.find('}', open + 1);
    if (close == std::string_view::npos) {
      on_text(text.substr(pos));
      return;
    }
    const std::string_view name = text.substr(open + 1, close - open - 1);
    if (is_identifier(name)) {
      on_text(text.substr(pos, open - pos));
      on_placeholder(name);
      pos = close + 1;
    } else {
      on_text(text.substr(pos, open + 1 - pos));
      pos = open + 1;
    }
  }
}

std::string builtin_text(TemplateId id) {
  const std::string_view file = template_file_name(id);
  for (const auto& [name, body] : embedded::kResources) {
    if (name == file) return std::string(body);
  }
  throw Error(ErrorCode::kIo, "no built-in template " + std::string(file));
}

void require_field(const std::string& value, const char* field, const Sample& sample) {
  if (value.empty()) {
    throw Error(ErrorCode::kMissingField,
                "sample '" + sample.id + "' has no " + field);
  }
}

}  // namespace

std::string_view template_file_name(TemplateId id) {
  switch (id) {
    case TemplateId::kTranslation: return "translation.txt";
    case TemplateId::kMath: return "math.txt";
    case TemplateId::kTextToSql: return "text_to_sql.txt";
    case TemplateId::kSentiment: return "sentiment.txt";
    case TemplateId::kReflection: return "reflection.txt";
    case TemplateId::kJudge: return "judge.txt";
  }
  return "";
}

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  scan_template(
      text, [&](std::string_view chunk) { out.append(chunk); },
      [&](std::string_view name) {
        auto it = values.find(std::string(name));
        if (it == values.end()) {
          throw Error(ErrorCode::kMissingField,
                      "no value for template placeholder {" + std::string(name) + "}");
        }
        out.append(it->second);
      });
  return out;
}

std::vector<std::string> template_placeholders(std::string_view text) {
  std::vector<std::string> names;
  scan_template(
      text, [](std::string_view) {},
      [&](std::string_view name) {
        for (const auto& n : names) {
          if (n == name) return;
        }
        names.emplace_back(name);
      });
  return names;
}

PromptTemplates::PromptTemplates() : current_date_(kDefaultSqlDate) {
  for (TemplateId id : kAllTemplates) texts_[id] = builtin_text(id);
}

PromptTemplates PromptTemplates::from_directory(const std::filesystem::path& dir) {
  PromptTemplates templates;
  for (TemplateId id : kAllTemplates) {
    const auto path = dir / template_file_name(id);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read template " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    templates.set_text(id, buf.str());
  }
  return templates;
}

const std::string& PromptTemplates::text(TemplateId id) const { return texts_.at(id); }

void PromptTemplates::set_text(TemplateId id, std::string text) {
  texts_[id] = std::move(text);
}

std::string render_schema_ddl(const std::vector<TableSchema>& schema) {
  std::string out;
  for (const auto& table : schema) {
    if (!out.empty()) out += "\n\n";
    if (!table.ddl.empty()) {
      out += table.ddl;
      if (out.back() != ';') out += ';';
      continue;
    }
    out += "CREATE TABLE " + table.name + " (\n";
    for (size_t i = 0; i < table.columns.size(); ++i) {
      const auto& col = table.columns[i];
      out += "  " + col.name;
      if (!col.type.empty()) out += " " + col.type;
      if (i + 1 < table.columns.size()) out += ",";
      out += "\n";
    }
    out += ");";
  }
  return out;
}

namespace {

struct InitialPromptBuilder {
  const Sample& sample;
  const PromptTemplates& templates;

  std::string operator()(const TranslationInput& in) const {
    require_field(in.source, "source text", sample);
    require_field(in.target_language, "target language", sample);
    return render_template(templates.text(TemplateId::kTranslation),
                           {{"language", in.target_language}, {"source", in.source}});
  }
  std::string operator()(const MathInput& in) const {
    require_field(in.problem, "problem statement", sample);
    return render_template(templates.text(TemplateId::kMath), {{"problem", in.problem}});
  }
  std::string operator()(const TextToSqlInput& in) const {
    require_field(in.question, "question", sample);
    if (in.schema.empty()) {
      throw Error(ErrorCode::kMissingField, "sample '" + sample.id + "' has no schema");
    }
    return render_template(templates.text(TemplateId::kTextToSql),
                           {{"current_date", templates.current_date()},
                            {"table_name_and_schema", render_schema_ddl(in.schema)},
                            {"question", in.question}});
  }
  std::string operator()(const SentimentInput& in) const {
    require_field(in.review, "review text", sample);
    return render_template(templates.text(TemplateId::kSentiment), {{"review", in.review}});
  }
};

}  // namespace

Message build_initial_prompt(const Sample& sample, const PromptTemplates& templates) {
  return Message{Role::kUser, std::visit(InitialPromptBuilder{sample, templates}, sample.input),
                 false};
}

Message build_reflection_prompt(std::string_view first_user_message,
                                const std::optional<std::string>& feedback_output,
                                const PromptTemplates& templates) {
  return Message{Role::kUser,
                 render_template(templates.text(TemplateId::kReflection),
                                 {{"feedback_mechanism_output", feedback_output.value_or("")},
                                  {"first_user_message", std::string(first_user_message)}}),
                 false};
}

Message build_judge_prompt(std::string_view user_query, std::string_view candidate,
                           const PromptTemplates& templates) {
  return Message{Role::kUser,
                 render_template(templates.text(TemplateId::kJudge),
                                 {{"user_query", std::string(user_query)},
                                  {"context", std::string(candidate)}}),
                 false};
}

}  // namespace reflectbench
