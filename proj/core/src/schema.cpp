#include "scisent/schema.hpp"

#include <algorithm>

#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

constexpr std::array<Category, kCategoryCount> kOrder = {
    Category::Overall,    Category::ResearchGap, Category::Description, Category::Result,
    Category::Limitation, Category::Extension,   Category::Other,
};

constexpr std::array<std::string_view, kCategoryCount> kCanonical = {
    "Overall", "Research Gap", "Description", "Result", "Limitation", "Extension", "Other",
};

constexpr std::array<std::string_view, kCategoryCount> kSnake = {
    "overall", "research_gap", "description", "result", "limitation", "extension", "other",
};

const std::array<CategoryDefinition, kCategoryCount> kDefinitions = {{
    {Category::Overall, Level::Topic,
     "Gives a general overview of the research area as a whole rather than of one study."},
    {Category::ResearchGap, Level::Topic,
     "Identifies unresolved issues or open questions in the field, signalling the need for "
     "further research on the topic."},
    {Category::Description, Level::Study,
     "Describes an individual study, for example its aim, approach, data or method."},
    {Category::Result, Level::Study, "Reports the findings or outcomes of an individual study."},
    {Category::Limitation, Level::Study,
     "Points out a methodological or conceptual shortcoming of a particular study."},
    {Category::Extension, Level::Study,
     "Explains how the current work extends the body of knowledge: the motivation behind it, "
     "new ideas, contrasting perspectives or elaborations of existing approaches."},
    {Category::Other, Level::None,
     "Does not fit any of the other categories; used instead of forcing a low-confidence "
     "assignment."},
}};

}  // namespace

const std::array<Category, kCategoryCount>& all_categories() noexcept { return kOrder; }

std::string_view canonical_name(Category c) noexcept { return kCanonical[index_of(c)]; }

std::string_view snake_name(Category c) noexcept { return kSnake[index_of(c)]; }

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::Topic:
      return "Topic";
    case Level::Study:
      return "Study";
    case Level::None:
      break;
  }
  return "None";
}

const CategoryDefinition& definition(Category c) noexcept { return kDefinitions[index_of(c)]; }

std::string normalize_label(std::string_view text) {
  std::string out = to_lower_ascii(collapse_whitespace(text));
  // Stripping punctuation can expose whitespace ("limitation ." -> "limitation ").
  for (;;) {
    const auto n = out.size();
    while (!out.empty() && (out.back() == '.' || out.back() == ':' || out.back() == ',')) {
      out.pop_back();
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    if (out.size() == n) break;
  }
  return out;
}

std::optional<Category> try_parse_label(std::string_view text) noexcept {
  try {
    const std::string norm = normalize_label(text);
    for (Category c : kOrder) {
      if (norm == to_lower_ascii(canonical_name(c)) || norm == snake_name(c)) return c;
    }
  } catch (...) {
  }
  return std::nullopt;
}

Category parse_label(std::string_view text) {
  if (auto c = try_parse_label(text)) return *c;
  throw UnknownLabel(std::string(text));
}

}  // namespace scisent
