#include <doctest.h>

#include <set>

#include "scisent/error.hpp"
#include "scisent/schema.hpp"

using namespace scisent;

TEST_CASE("seven categories in fixed order") {
  const auto& cats = all_categories();
  REQUIRE(cats.size() == 7);
  CHECK(canonical_name(cats[0]) == "Overall");
  CHECK(canonical_name(cats[1]) == "Research Gap");
  CHECK(canonical_name(cats[6]) == "Other");
  for (std::size_t i = 0; i < cats.size(); ++i) CHECK(index_of(cats[i]) == i);
}

TEST_CASE("levels") {
  CHECK(definition(Category::Overall).level == Level::Topic);
  CHECK(definition(Category::ResearchGap).level == Level::Topic);
  for (auto c : {Category::Description, Category::Result, Category::Limitation, Category::Extension})
    CHECK(definition(c).level == Level::Study);
  CHECK(definition(Category::Other).level == Level::None);
  for (auto c : all_categories()) CHECK_FALSE(definition(c).definition_text.empty());
}

TEST_CASE("label parsing tolerates case, spacing and trailing punctuation") {
  CHECK(parse_label("research gap") == Category::ResearchGap);
  CHECK(parse_label("  Research   Gap. ") == Category::ResearchGap);
  CHECK(parse_label("research_gap") == Category::ResearchGap);
  CHECK(parse_label("RESULT:") == Category::Result);
  CHECK(parse_label("Limitation,") == Category::Limitation);
  CHECK_FALSE(try_parse_label("Gap").has_value());
  CHECK_FALSE(try_parse_label("").has_value());
  CHECK_THROWS_AS(parse_label("Method"), UnknownLabel);
}

TEST_CASE("names round trip") {
  std::set<std::string_view> seen;
  for (auto c : all_categories()) {
    CHECK(parse_label(canonical_name(c)) == c);
    CHECK(parse_label(snake_name(c)) == c);
    CHECK(seen.insert(canonical_name(c)).second);
  }
}
