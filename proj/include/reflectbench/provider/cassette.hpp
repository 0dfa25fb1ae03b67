#pragma once

#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "json.hpp"
#include "reflectbench/provider/provider.hpp"

namespace reflectbench {

// One line of a cassette file.
struct CassetteRecord {
  std::string request_hash;
  std::vector<Message> transcript;
  GenerationParams params;
  ModelResponse response;

  nlohmann::json to_json() const;
  static CassetteRecord from_json(const nlohmann::json& j);
};

nlohmann::json message_to_json(const Message& m);
Message message_from_json(const nlohmann::json& j);
nlohmann::json usage_to_json(const TokenUsage& u);
TokenUsage usage_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const GenerationParams& p);
GenerationParams params_from_json(const nlohmann::json& j);

// Forwards to `inner` and appends each successful exchange to a JSONL
// cassette. `scope` (normally the model id) is folded into the request hash
// so several models can share one cassette.
class RecordingProvider final : public Provider {
 public:
  RecordingProvider(std::shared_ptr<Provider> inner, std::filesystem::path cassette,
                    std::string scope);

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override;

 private:
  std::shared_ptr<Provider> inner_;
  std::filesystem::path path_;
  std::string scope_;
  std::mutex mu_;
  std::ofstream out_;
};

// Serves responses from a cassette. Identical requests recorded more than
// once are replayed in recording order, after which the last one repeats.
// An unrecorded request raises CassetteMiss.
class ReplayProvider final : public Provider {
 public:
  ReplayProvider(const std::filesystem::path& cassette, std::string scope);

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override;

  size_t size() const { return total_; }

 private:
  std::filesystem::path path_;
  std::string scope_;
  std::mutex mu_;
  std::map<std::string, std::deque<ModelResponse>> by_hash_;
  size_t total_ = 0;
};

}  // namespace reflectbench
