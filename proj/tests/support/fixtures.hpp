#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "scisent/corpus.hpp"

namespace scisent::testing {

// Removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "scisent");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string random_sentence(std::mt19937_64& rng, std::size_t min_words = 10, std::size_t max_words = 18);

// per_category manual records per label, ids s0001.., all marked train.
Dataset unsplit_dataset(std::size_t per_category = 100, std::uint64_t seed = 7);

// The 700-sentence benchmark shape: unsplit_dataset split 0.7/0.1/0.2.
Dataset base_benchmark(std::uint64_t seed = 7);

// Mock table answering every sentence of `split` with its gold label, except
// ids listed in `wrong` (answered with the given category) and `gibberish`.
struct ClassifyFixture {
  std::map<std::string, Category> wrong;
  std::vector<std::string> gibberish;
};
nlohmann::json classify_fixture(const Dataset& d, Split split, const ClassifyFixture& f = {});

// Candidates per manual train/validation record, each far from the original.
nlohmann::json paraphrase_fixture(const Dataset& d, std::size_t per_record = 6, std::uint64_t seed = 11);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace scisent::testing
