#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scisent/schema.hpp"

namespace scisent {

enum class Split : std::uint8_t { Train, Validation, Test };
enum class Provenance : std::uint8_t { Manual, Synthetic };

std::string_view split_name(Split s) noexcept;  // "train" | "validation" | "test"
Split parse_split(std::string_view text);        // throws ConfigError
std::string_view provenance_name(Provenance p) noexcept;

struct SentenceRecord {
  std::string id;
  std::string text;
  Category label = Category::Other;
  Split split = Split::Train;
  Provenance provenance = Provenance::Manual;
  // Present iff provenance == Synthetic; names the manual sentence paraphrased.
  std::optional<std::string> source_id;

  bool operator==(const SentenceRecord&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<SentenceRecord> records;

  std::vector<const SentenceRecord*> in_split(Split s) const;  // stable id order
};

enum class DatasetFormat : std::uint8_t { JsonLines, Csv };

// .csv selects Csv, anything else JsonLines.
DatasetFormat format_for_path(std::string_view path) noexcept;

// Records keep file order; the dataset is named after the file stem.
// Throws IoError or MalformedRecord.
Dataset load_dataset(const std::string& path, DatasetFormat format);
Dataset parse_dataset(std::string_view content, DatasetFormat format, std::string name = {});

// Records are written in id order, atomically (temp file + rename).
void save_dataset(const Dataset& d, const std::string& path, DatasetFormat format);
std::string serialize_dataset(const Dataset& d, DatasetFormat format);

enum class ValidationProfile : std::uint8_t { Base, Augmented, None };
ValidationProfile parse_profile(std::string_view text);

struct Violation {
  std::string record_id;  // empty for dataset-level findings
  std::string message;
};

// Base: 700 manual records, 100 per category, 490/70/140.
// Augmented: 2450/350/140, test all manual, every synthetic source resolvable.
std::vector<Violation> validate_dataset(const Dataset& d, ValidationProfile profile);

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

// Per-category allocation by largest remainder; ties go to train, then
// validation. Exposed for testing.
std::array<std::size_t, 3> allocate_counts(std::size_t n, const SplitRatios& ratios);

// Assigns split fields per category from a permutation seeded by
// (seed, category). Record order and every other field are preserved.
// Throws InvalidRatios or EmptyCategory.
Dataset stratified_split(const Dataset& d, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace scisent
