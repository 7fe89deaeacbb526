#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scisent/schema.hpp"

namespace scisent {

// Item x category count table: counts[i][q] raters put item i in category q.
// Every row sums to the number of raters.
class RatingMatrix {
 public:
  // Throws InvalidRatingMatrix unless k >= 2, n >= 2, at least one item, and
  // every row has k entries summing to n.
  RatingMatrix(std::vector<std::string> items, std::size_t raters,
               std::vector<std::vector<int>> counts);

  std::size_t item_count() const noexcept { return items_.size(); }
  std::size_t category_count() const noexcept { return categories_; }
  std::size_t raters() const noexcept { return raters_; }
  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::vector<std::vector<int>>& counts() const noexcept { return counts_; }

  // Collapses to {column, everything else}.
  RatingMatrix dichotomize(std::size_t column) const;

 private:
  std::vector<std::string> items_;
  std::size_t raters_;
  std::size_t categories_;
  std::vector<std::vector<int>> counts_;
};

// Mean per-item share of agreeing ordered rater pairs.
double observed_agreement(const RatingMatrix& r);

// Throws DegenerateMarginals when the chance agreement is 1.
double fleiss_kappa(const RatingMatrix& r);

// Throws DegenerateChance when the chance agreement is 1.
double gwet_ac1_overall(const RatingMatrix& r);

// One-vs-rest AC1 for a single category column.
double gwet_ac1_per_category(const RatingMatrix& r, std::size_t column);
double gwet_ac1_per_category(const RatingMatrix& r, Category c);

// Raw rater labels: CSV with columns item_id, rater_id, label. Every item must
// carry the same number of ratings. Columns follow schema order.
RatingMatrix parse_raw_ratings_csv(std::string_view content);
// Count table: CSV with item_id plus one column per category (canonical or
// snake names, any order). The raters count is the common row sum.
RatingMatrix parse_count_matrix_csv(std::string_view content);
RatingMatrix load_ratings(const std::string& path, bool raw_labels);

struct AgreementReport {
  double fleiss_kappa = 0.0;
  double ac1_overall = 0.0;
  std::vector<double> ac1_per_category;  // schema order
  std::size_t items = 0;
  std::size_t raters = 0;
};

AgreementReport agreement_report(const RatingMatrix& r);
std::string agreement_report_to_json(const AgreementReport& a);

}  // namespace scisent
