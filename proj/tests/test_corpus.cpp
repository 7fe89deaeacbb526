#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "scisent/csv.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

using namespace scisent;
using scisent::testing::TempDir;

namespace {

std::map<std::pair<Category, Split>, int> tally(const Dataset& d) {
  std::map<std::pair<Category, Split>, int> t;
  for (const auto& r : d.records) ++t[{r.label, r.split}];
  return t;
}

}  // namespace

TEST_CASE("csv handles quotes, escapes and embedded newlines") {
  const auto rows = csv::parse("a,b\r\n\"x, y\",\"say \"\"hi\"\"\nthere\"\n\n1,2\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].fields[0] == "x, y");
  CHECK(rows[1].fields[1] == "say \"hi\"\nthere");
  CHECK(rows[2].line_number == 5);
  CHECK_THROWS_AS(csv::parse("a,\"open\n"), MalformedRecord);
  CHECK(csv::format_row({"plain", "with,comma", "q\"uote"}) == "plain,\"with,comma\",\"q\"\"uote\"\n");
}

TEST_CASE("jsonl loading and errors carry line numbers") {
  const std::string good =
      R"({"id":"a","text":"One.","label":"Result","split":"train"})"
      "\n"
      R"({"id":"b","text":"Two.","label":"research gap","split":"test","provenance":"manual"})"
      "\n";
  const Dataset d = parse_dataset(good, DatasetFormat::JsonLines, "x");
  REQUIRE(d.records.size() == 2);
  CHECK(d.records[1].label == Category::ResearchGap);
  CHECK(d.records[1].split == Split::Test);
  CHECK(d.records[0].provenance == Provenance::Manual);

  const std::string bad = good + R"({"id":"c","text":"Three.","label":"Method","split":"train"})" + "\n";
  try {
    parse_dataset(bad, DatasetFormat::JsonLines);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& e) {
    CHECK(e.line_number() == 3);
  }
  CHECK_THROWS_AS(parse_dataset(R"({"id":"a","label":"Result","split":"train"})", DatasetFormat::JsonLines),
                  MalformedRecord);
  CHECK_THROWS_AS(parse_dataset("{not json", DatasetFormat::JsonLines), MalformedRecord);
  CHECK_THROWS_AS(load_dataset("/nonexistent/file.jsonl", DatasetFormat::JsonLines), IoError);
}

TEST_CASE("save and load round trip in both formats") {
  TempDir tmp;
  Dataset d = scisent::testing::base_benchmark();
  d.records[3].text = "Has \"quotes\", commas,\nand a newline.";
  for (auto fmt : {DatasetFormat::JsonLines, DatasetFormat::Csv}) {
    const std::string path = tmp.file(fmt == DatasetFormat::Csv ? "d.csv" : "d.jsonl");
    save_dataset(d, path, fmt);
    Dataset back = load_dataset(path, fmt);
    CHECK(back.name == "d");
    auto sorted = d.records;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.id < b.id; });
    CHECK(back.records == sorted);
    CHECK(serialize_dataset(back, fmt) == read_file(path));
  }
}

TEST_CASE("largest remainder allocation") {
  CHECK(allocate_counts(100, {}) == std::array<std::size_t, 3>{70, 10, 20});
  CHECK(allocate_counts(10, {0.7, 0.1, 0.2}) == std::array<std::size_t, 3>{7, 1, 2});
  // 7 * (0.7, 0.1, 0.2) = 4.9, 0.7, 1.4 -> floors 4,0,1, two leftovers to .9 and .7
  CHECK(allocate_counts(7, {}) == std::array<std::size_t, 3>{5, 1, 1});
  CHECK(allocate_counts(3, {1.0 / 3, 1.0 / 3, 1.0 / 3}) == std::array<std::size_t, 3>{1, 1, 1});
  for (std::size_t n = 0; n < 200; ++n) {
    auto c = allocate_counts(n, {0.6, 0.15, 0.25});
    CHECK(c[0] + c[1] + c[2] == n);
  }
}

TEST_CASE("stratified split is exact, deterministic and seed dependent") {
  const Dataset raw = scisent::testing::unsplit_dataset();
  const Dataset a = stratified_split(raw, {}, 42);
  const Dataset b = stratified_split(raw, {}, 42);
  const Dataset c = stratified_split(raw, {}, 43);
  CHECK(a.records == b.records);
  CHECK_FALSE(a.records == c.records);
  CHECK(a.in_split(Split::Train).size() == 490);
  CHECK(a.in_split(Split::Validation).size() == 70);
  CHECK(a.in_split(Split::Test).size() == 140);
  for (const auto& [key, n] : tally(a)) {
    const int want = key.second == Split::Train ? 70 : key.second == Split::Validation ? 10 : 20;
    CHECK(n == want);
  }
  // Record order of the input must not matter.
  Dataset shuffled = raw;
  std::reverse(shuffled.records.begin(), shuffled.records.end());
  const Dataset d = stratified_split(shuffled, {}, 42);
  for (const auto* r : a.in_split(Split::Test)) {
    auto it = std::find_if(d.records.begin(), d.records.end(), [&](auto& x) { return x.id == r->id; });
    CHECK(it->split == Split::Test);
  }
  CHECK(validate_dataset(a, ValidationProfile::Base).empty());
}

TEST_CASE("split errors") {
  const Dataset raw = scisent::testing::unsplit_dataset(5);
  CHECK_THROWS_AS(stratified_split(raw, {0.5, 0.1, 0.2}, 1), InvalidRatios);
  CHECK_THROWS_AS(stratified_split(raw, {1.2, -0.1, -0.1}, 1), InvalidRatios);
  Dataset missing = raw;
  std::erase_if(missing.records, [](auto& r) { return r.label == Category::Other; });
  CHECK_THROWS_AS(stratified_split(missing, {}, 1), EmptyCategory);
}

TEST_CASE("validation profiles") {
  Dataset d = scisent::testing::base_benchmark();
  CHECK(validate_dataset(d, ValidationProfile::Base).empty());
  CHECK_FALSE(validate_dataset(d, ValidationProfile::Augmented).empty());

  Dataset synth = d;
  SentenceRecord s = *d.in_split(Split::Test)[0];
  s.id += "#v1";
  s.provenance = Provenance::Synthetic;
  s.source_id = d.in_split(Split::Test)[0]->id;
  synth.records.push_back(s);
  const auto v = validate_dataset(synth, ValidationProfile::None);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].message == "synthetic record in test split");

  Dataset dangling = d;
  SentenceRecord t = *d.in_split(Split::Train)[0];
  t.id = "orphan";
  t.provenance = Provenance::Synthetic;
  t.source_id = "nope";
  dangling.records.push_back(t);
  CHECK_FALSE(validate_dataset(dangling, ValidationProfile::None).empty());

  Dataset shrunk = d;
  shrunk.records.pop_back();
  CHECK_FALSE(validate_dataset(shrunk, ValidationProfile::Base).empty());
}
