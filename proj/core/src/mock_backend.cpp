#include <algorithm>

#include <json.hpp>

#include "scisent/backend.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {

MockBackend::MockBackend(Table table, bool strict, std::string default_response)
    : table_(std::move(table)), strict_(strict), default_response_(std::move(default_response)) {}

MockBackend::MockBackend(MockBackend&& other) noexcept
    : table_(std::move(other.table_)),
      strict_(other.strict_),
      default_response_(std::move(other.default_response_)),
      calls_(other.calls_.load()) {}

MockBackend MockBackend::from_json(std::string_view content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("mock fixture is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("mock fixture must be a JSON object");

  bool strict = true;
  std::string fallback;
  const nlohmann::json* responses = &doc;
  if (doc.contains("responses") && doc["responses"].is_object()) {
    responses = &doc["responses"];
    if (doc.contains("strict")) strict = doc["strict"].get<bool>();
    if (doc.contains("default")) fallback = doc["default"].get<std::string>();
  }

  Table table;
  for (const auto& [key, value] : responses->items()) {
    std::vector<std::string> seq;
    if (value.is_string()) {
      seq.push_back(value.get<std::string>());
    } else if (value.is_array() && !value.empty()) {
      for (const auto& v : value) {
        if (!v.is_string()) throw ConfigError("mock fixture " + key + " holds a non-string");
        seq.push_back(v.get<std::string>());
      }
    } else {
      throw ConfigError("mock fixture " + key + " must be a string or non-empty array");
    }
    table.emplace(key, std::move(seq));
  }
  return MockBackend(std::move(table), strict, std::move(fallback));
}

MockBackend MockBackend::from_json_file(const std::string& path) {
  return from_json(read_file(path));
}

GenerationResult MockBackend::generate(const BackendConfig& config,
                                       const GenerationRequest& request) {
  calls_.fetch_add(1, std::memory_order_relaxed);
  GenerationResult result;
  result.model_id = config.model_id;
  result.request_fingerprint = request_fingerprint(config, request.prompt);

  auto it = table_.find(result.request_fingerprint);
  if (it == table_.end()) it = table_.find(request.key);
  if (it == table_.end()) {
    if (strict_) throw MissingFixture(request.key.empty() ? result.request_fingerprint : request.key);
    result.text = default_response_;
    return result;
  }
  const auto& seq = it->second;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(std::max(request.attempt, 0)),
                                         seq.size() - 1);
  result.text = seq[idx];
  return result;
}

std::size_t MockBackend::calls() const { return calls_.load(std::memory_order_relaxed); }

}  // namespace scisent
