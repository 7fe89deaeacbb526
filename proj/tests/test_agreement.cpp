#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "scisent/agreement.hpp"
#include "scisent/error.hpp"

using namespace scisent;

namespace {

RatingMatrix from_labels(const std::vector<std::vector<int>>& labels, std::size_t k) {
  std::vector<std::string> ids;
  std::vector<std::vector<int>> counts;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ids.push_back("i" + std::to_string(i));
    std::vector<int> row(k, 0);
    for (int l : labels[i]) ++row[l];
    counts.push_back(row);
  }
  return RatingMatrix(ids, labels[0].size(), counts);
}

}  // namespace

TEST_CASE("worked two-item fixture") {
  RatingMatrix r({"a", "b"}, 3, {{3, 0}, {1, 2}});
  CHECK(observed_agreement(r) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(std::abs(fleiss_kappa(r) - 0.25) <= 1e-9);
  CHECK(std::abs(gwet_ac1_overall(r) - 0.40) <= 1e-9);
}

TEST_CASE("perfect agreement is exactly one") {
  RatingMatrix r({"a", "b", "c", "d"}, 3, {{3, 0, 0, 0, 0, 0, 0}, {0, 3, 0, 0, 0, 0, 0}, {0, 0, 0, 3, 0, 0, 0},
                                           {0, 0, 0, 0, 0, 0, 3}});
  CHECK(fleiss_kappa(r) == 1.0);
  CHECK(gwet_ac1_overall(r) == 1.0);
  for (std::size_t q = 0; q < 7; ++q) CHECK(gwet_ac1_per_category(r, q) == 1.0);
}

TEST_CASE("degenerate and invalid matrices") {
  RatingMatrix all_one({"a", "b"}, 2, {{2, 0}, {2, 0}});
  CHECK_THROWS_AS(fleiss_kappa(all_one), DegenerateMarginals);
  CHECK_THROWS_AS(RatingMatrix({"a"}, 3, {{2, 0}}), InvalidRatingMatrix);
  CHECK_THROWS_AS(RatingMatrix({"a"}, 1, {{1, 0}}), InvalidRatingMatrix);
  CHECK_THROWS_AS(RatingMatrix({}, 2, {}), InvalidRatingMatrix);
}

TEST_CASE("randomized matrices match pairwise enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t items = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    const std::size_t raters = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const int k = std::uniform_int_distribution<int>(2, 7)(rng);
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::bernoulli_distribution agree(0.6);
    std::vector<std::vector<int>> labels(items);
    for (auto& row : labels) {
      const int first = lab(rng);
      for (std::size_t r = 0; r < raters; ++r) row.push_back(agree(rng) ? first : lab(rng));
    }
    const RatingMatrix m = from_labels(labels, k);
    const auto o = oracle::pairwise_agreement(labels, k);
    if (!std::isfinite(o.kappa) || !std::isfinite(o.ac1)) continue;
    CAPTURE(trial);
    CHECK(std::abs(fleiss_kappa(m) - o.kappa) <= 1e-12);
    CHECK(std::abs(gwet_ac1_overall(m) - o.ac1) <= 1e-12);
    // Per category equals the two-category statistic of the collapsed labels.
    for (int q = 0; q < k; ++q) {
      std::vector<std::vector<int>> bin = labels;
      for (auto& row : bin)
        for (auto& l : row) l = (l == q) ? 0 : 1;
      const auto ob = oracle::pairwise_agreement(bin, 2);
      if (std::isfinite(ob.ac1)) CHECK(std::abs(gwet_ac1_per_category(m, q) - ob.ac1) <= 1e-12);
    }
  }
}

TEST_CASE("raw rating csv") {
  const std::string raw =
      "item_id,rater_id,label\n"
      "s1,A,Result\ns1,B,Result\ns1,C,Limitation\n"
      "s2,A,research gap\ns2,B,Research Gap\ns2,C,Research Gap\n";
  const RatingMatrix m = parse_raw_ratings_csv(raw);
  CHECK(m.item_count() == 2);
  CHECK(m.raters() == 3);
  CHECK(m.category_count() == 7);
  CHECK(m.counts()[0][3] == 2);
  CHECK(m.counts()[1][1] == 3);

  CHECK_THROWS(parse_raw_ratings_csv("item_id,rater_id,label\ns1,A,Result\ns1,A,Other\n"));
  CHECK_THROWS(parse_raw_ratings_csv("item_id,rater_id,label\ns1,A,Result\ns1,B,Other\ns2,A,Other\n"));
  CHECK_THROWS(parse_raw_ratings_csv("item_id,rater_id,label\ns1,A,Method\ns1,B,Other\n"));

  const std::string counts =
      "item_id,Overall,Research Gap,Description,Result,Limitation,Extension,Other\n"
      "s1,0,0,0,2,1,0,0\ns2,0,3,0,0,0,0,0\n";
  const RatingMatrix c = parse_count_matrix_csv(counts);
  CHECK(c.counts() == m.counts());

  const auto rep = agreement_report(m);
  CHECK(rep.ac1_per_category.size() == 7);
  const auto j = nlohmann::json::parse(agreement_report_to_json(rep));
  CHECK(j["items"] == 2);
  CHECK(j["gwet_ac1_per_category"].contains("Limitation"));
}
