#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scisent/backend.hpp"
#include "scisent/corpus.hpp"

namespace scisent {

struct AugmentationPolicy {
  int variants_per_sentence = 4;
  // A variant must be strictly farther than this from the original and, on
  // average, from its siblings.
  double min_distance = 0.20;
  int max_regeneration_attempts = 5;  // per variant slot
  // Holds {{SENTENCE}} and {{CATEGORY}}.
  std::string generation_template;

  void validate() const;  // throws ConfigError
};

// Reads a generation prompt file and checks both placeholders are present.
std::string load_generation_template(const std::string& path);
std::string render_generation_prompt(std::string_view tmpl, const SentenceRecord& record);

enum class GateCheck : std::uint8_t { ToOriginal, SiblingMean };

struct GateResult {
  bool passed = false;
  std::optional<GateCheck> failed;
  double to_original = 0.0;
  std::optional<double> sibling_mean;  // absent without siblings

  std::string reason() const;
};

GateResult gate_variant(std::string_view original, std::string_view candidate,
                        std::span<const std::string> siblings, const AugmentationPolicy& policy);

struct Variant {
  std::string text;
  double to_original = 0.0;
  std::optional<double> mean_to_siblings;
};

enum class VariantStatus : std::uint8_t { Complete, Exhausted };

struct VariantSet {
  std::string source_id;
  std::vector<Variant> variants;
  int attempts_used = 0;
  VariantStatus status = VariantStatus::Exhausted;
  std::vector<std::string> errors;  // backend failures, one per failed attempt
};

// Requests paraphrases one at a time, gating each against the original and the
// siblings accepted so far, then re-checks the finished set. A slot that burns
// max_regeneration_attempts without an accepted variant ends the set as
// Exhausted (accepted variants are kept).
VariantSet generate_variant_set(const SentenceRecord& record, Backend& backend,
                                const BackendConfig& config, const AugmentationPolicy& policy);

struct CompletionReport {
  std::size_t sources = 0;
  std::size_t complete = 0;
  std::size_t exhausted = 0;
  std::vector<std::string> exhausted_ids;
  std::size_t new_train = 0;
  std::size_t new_validation = 0;
  std::map<int, std::size_t> attempts_histogram;  // attempts used -> number of sources
};

std::string completion_report_to_json(const CompletionReport& r);

struct AugmentResult {
  Dataset dataset;
  std::vector<VariantSet> sets;
  CompletionReport report;
};

struct AugmentOptions {
  // Base demands the 700-sentence benchmark shape; None skips the check.
  ValidationProfile precondition = ValidationProfile::Base;
  std::size_t concurrency = 4;
};

// Every manual train/validation record gains its accepted variants as
// synthetic records with ids "{source_id}#v{n}", placed right after the
// source. Test records are copied untouched. Throws ConfigError when the
// precondition profile reports violations.
AugmentResult augment_dataset(const Dataset& d, Backend& backend, const BackendConfig& config,
                              const AugmentationPolicy& policy, const AugmentOptions& options = {});

struct SimilarityCell {
  double to_original = 0.0;   // NaN when empty
  double to_siblings = 0.0;   // NaN when empty
  std::size_t count = 0;
};

struct SimilarityRow {
  Split split = Split::Train;
  std::optional<Category> category;  // nullopt: Average row
  std::vector<SimilarityCell> per_variant;
};

struct SimilarityReport {
  std::size_t variant_slots = 0;
  std::vector<SimilarityRow> rows;  // per split: Average, then categories
  double band_low = 0.45;
  double band_high = 0.70;
  bool within_band = true;  // every non-empty entry lies in [band_low, band_high]
};

// Mean distances per split, category and variant index. Throws DanglingSource.
SimilarityReport similarity_report(const Dataset& d, double band_low = 0.45, double band_high = 0.70);
std::string similarity_report_to_csv(const SimilarityReport& r);

}  // namespace scisent
