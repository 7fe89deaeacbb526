#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scisent/backend.hpp"
#include "scisent/corpus.hpp"
#include "scisent/schema.hpp"

namespace scisent {

inline constexpr std::string_view kSentencePlaceholder = "{{SENTENCE}}";
inline constexpr std::string_view kCategoryPlaceholder = "{{CATEGORY}}";

// Zero-shot prompt in three parts. On disk the sections are introduced by
// "## OBJECTIVE", "## CATEGORIES" and "## PROCEDURE"; each category line reads
// "<Name>: <definition>".
struct PromptTemplate {
  std::string objective_text;
  std::vector<std::pair<Category, std::string>> category_definitions;
  std::string procedure_text;  // holds {{SENTENCE}} exactly once

  // Throws TemplateError.
  void validate() const;
};

PromptTemplate parse_template(std::string_view content);
PromptTemplate load_template(const std::string& path);  // IoError | TemplateError

std::string build_prompt(const PromptTemplate& tmpl, std::string_view sentence_text);

enum class ParseRule : std::uint8_t { FormatLine, Fallback, None };
std::string_view parse_rule_name(ParseRule r) noexcept;

struct ParseOutcome {
  std::optional<Category> category;
  ParseRule rule = ParseRule::None;
  std::string diagnostic;
};

// First line of the form "CATEGORY: <label>" wins. Otherwise, when exactly one
// category name occurs as a whole word anywhere, that category is returned
// under the fallback rule. Anything else is unparsed.
ParseOutcome parse_response(std::string_view raw);

enum class ParseStatus : std::uint8_t { Parsed, Unparsed };

struct Prediction {
  std::string sentence_id;
  std::optional<Category> predicted;  // present iff status == Parsed
  std::string raw_response;
  ParseStatus status = ParseStatus::Unparsed;
  std::string request_fingerprint;
  std::string diagnostics;

  bool operator==(const Prediction&) const = default;
};

struct ClassificationRun {
  std::string run_id;
  std::string model_id;
  BackendConfig config_snapshot;
  std::string dataset_name;
  Split split = Split::Test;
  std::vector<Prediction> predictions;  // id order, one per sentence in the split
  std::chrono::system_clock::time_point started_at;
  std::chrono::system_clock::time_point finished_at;
  std::vector<std::string> notes;
  // Resolved settings echoed into the manifest by callers.
  std::map<std::string, std::string> metadata;

  std::size_t parsed_count() const;
  std::size_t unparsed_count() const;
};

// Append-only response cache keyed by (model_id, request fingerprint). With a
// path, every insert is appended to a JSON Lines file immediately so an
// interrupted run resumes where it stopped.
class RunStore {
 public:
  RunStore() = default;
  explicit RunStore(std::string path);  // loads existing entries

  std::optional<std::string> find(const std::string& model_id,
                                  const std::string& fingerprint) const;
  // No-op when the key is already present.
  void put(const std::string& model_id, const std::string& fingerprint,
           const std::string& raw_response);
  std::size_t size() const;

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
};

struct ClassifyOptions {
  std::size_t concurrency = 4;
  std::function<std::chrono::system_clock::time_point()> clock =
      [] { return std::chrono::system_clock::now(); };
  std::optional<std::string> run_id;
};

// Backend failures become Unparsed predictions carrying the error; AuthError
// aborts since no later request can succeed either.
ClassificationRun classify_split(const Dataset& d, Split split, const PromptTemplate& tmpl,
                                 Backend& backend, const BackendConfig& config, RunStore& cache,
                                 const ClassifyOptions& options = {});

// Writes <dir>/predictions.jsonl and <dir>/manifest.json.
void write_run(const ClassificationRun& run, const std::string& dir);
ClassificationRun read_run(const std::string& manifest_path);

std::string prediction_to_json(const Prediction& p);
Prediction prediction_from_json(std::string_view line);

}  // namespace scisent
