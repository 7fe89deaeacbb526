#include "fixtures.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scisent/schema.hpp"
#include "scisent/text.hpp"

namespace scisent::testing {
namespace fs = std::filesystem;

namespace {

constexpr std::array<const char*, 48> kWords = {
    "model",    "corpus",   "annotation", "citation", "framework", "baseline", "accuracy",  "sentence",
    "review",   "approach", "evidence",   "dataset",  "prior",     "study",    "method",    "results",
    "neural",   "graph",    "retrieval",  "semantic", "feature",   "transfer", "domain",    "bias",
    "limited",  "extends",  "proposed",   "reported", "improves",  "fails",    "measured",  "across",
    "scholarly","authors",  "however",    "further",  "recent",    "classic",  "robust",    "sparse",
    "temporal", "lexical",  "attention",  "encoder",  "survey",    "gap",      "benchmark", "analysis"};

std::string pick(std::mt19937_64& rng) {
  return kWords[std::uniform_int_distribution<std::size_t>(0, kWords.size() - 1)(rng)];
}

}  // namespace

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string random_sentence(std::mt19937_64& rng, std::size_t min_words, std::size_t max_words) {
  const auto n = std::uniform_int_distribution<std::size_t>(min_words, max_words)(rng);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += pick(rng);
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out + ".";
}

Dataset unsplit_dataset(std::size_t per_category, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Dataset d;
  d.name = "base";
  const std::size_t total = per_category * kCategoryCount;
  for (std::size_t i = 0; i < total; ++i) {
    SentenceRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "s%04zu", i + 1);
    r.id = id;
    r.text = random_sentence(rng);
    r.label = all_categories()[i % kCategoryCount];
    d.records.push_back(std::move(r));
  }
  return d;
}

Dataset base_benchmark(std::uint64_t seed) {
  return stratified_split(unsplit_dataset(100, seed), SplitRatios{}, seed);
}

nlohmann::json classify_fixture(const Dataset& d, Split split, const ClassifyFixture& f) {
  nlohmann::json table = nlohmann::json::object();
  for (const auto* r : d.in_split(split)) {
    Category answer = r->label;
    if (auto it = f.wrong.find(r->id); it != f.wrong.end()) answer = it->second;
    table[r->id] = "CATEGORY: " + std::string(canonical_name(answer));
  }
  for (const auto& id : f.gibberish) table[id] = "zxq vortl mmph";
  return table;
}

nlohmann::json paraphrase_fixture(const Dataset& d, std::size_t per_record, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution swap(0.6);
  nlohmann::json table = nlohmann::json::object();
  for (const auto& r : d.records) {
    if (r.split == Split::Test || r.provenance != Provenance::Manual) continue;
    // Reword the original: most words replaced, sentence shape kept.
    std::vector<std::string> words;
    std::istringstream in(r.text);
    for (std::string w; in >> w;) words.push_back(w);
    auto seq = nlohmann::json::array();
    for (std::size_t k = 0; k < per_record; ++k) {
      std::string out;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += swap(rng) ? pick(rng) : words[i];
      }
      seq.push_back(out);
    }
    table[r.id] = seq;
  }
  return table;
}

void write_json(const std::string& path, const nlohmann::json& j) { write_file_atomic(path, j.dump(1) + "\n"); }

}  // namespace scisent::testing
