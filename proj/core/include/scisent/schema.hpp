#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace scisent {

// The seven rhetorical roles a related-work sentence can play. The enumerator
// order is the fixed reporting order: it indexes every confusion matrix row
// and every report table.
enum class Category : std::uint8_t {
  Overall,
  ResearchGap,
  Description,
  Result,
  Limitation,
  Extension,
  Other,
};

inline constexpr std::size_t kCategoryCount = 7;

// Whether a category talks about the research topic as a whole or about one
// specific cited (or the citing) study.
enum class Level : std::uint8_t { Topic, Study, None };

struct CategoryDefinition {
  Category category;
  Level level;
  std::string_view definition_text;
};

const std::array<Category, kCategoryCount>& all_categories() noexcept;

constexpr std::size_t index_of(Category c) noexcept { return static_cast<std::size_t>(c); }

// "Research Gap"
std::string_view canonical_name(Category c) noexcept;
// "research_gap"; bijective with canonical_name.
std::string_view snake_name(Category c) noexcept;

std::string_view level_name(Level level) noexcept;

const CategoryDefinition& definition(Category c) noexcept;

// Trim, collapse internal whitespace runs, lowercase, strip trailing '.', ':'
// and ','. Idempotent.
std::string normalize_label(std::string_view text);

// Resolves canonical or snake names after normalization. Throws UnknownLabel.
Category parse_label(std::string_view text);
std::optional<Category> try_parse_label(std::string_view text) noexcept;

}  // namespace scisent
