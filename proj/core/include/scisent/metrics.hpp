#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "scisent/corpus.hpp"
#include "scisent/schema.hpp"

namespace scisent {

// Rows: gold category in schema order. Columns: predicted category in schema
// order, then one Unparsed column.
class ConfusionMatrix {
 public:
  static constexpr std::size_t kRows = kCategoryCount;
  static constexpr std::size_t kCols = kCategoryCount + 1;
  static constexpr std::size_t kUnparsedCol = kCategoryCount;

  std::int64_t& at(std::size_t gold, std::size_t col) { return counts_[gold][col]; }
  std::int64_t at(std::size_t gold, std::size_t col) const { return counts_[gold][col]; }
  std::int64_t cell(Category gold, std::optional<Category> pred) const {
    return counts_[index_of(gold)][pred ? index_of(*pred) : kUnparsedCol];
  }

  std::int64_t row_sum(std::size_t gold) const;
  std::int64_t column_sum(std::size_t col) const;
  std::int64_t total() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::array<std::array<std::int64_t, kCols>, kRows> counts_{};
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Prf&) const = default;
};

using PerCategory = std::array<Prf, kCategoryCount>;

// Missing predictions land in the Unparsed column. Throws LengthMismatch, or
// ConfigError on empty input.
ConfusionMatrix confusion(std::span<const Category> gold,
                          std::span<const std::optional<Category>> pred);

// Precision denominators exclude the Unparsed column; recall denominators are
// full gold rows. 0/0 is 0.
PerCategory per_category_prf(const ConfusionMatrix& m);

double harmonic_mean(double p, double r) noexcept;

// Unweighted mean of each component across the seven categories. The map form
// throws MissingCategory unless all seven are present.
Prf macro_average(const PerCategory& values) noexcept;
Prf macro_average(const std::map<Category, Prf>& values);

struct EvalReport {
  ConfusionMatrix matrix;
  PerCategory per_category{};
  Prf macro;
  std::int64_t unparsed_count = 0;
  std::string run_id;
  Split split = Split::Test;
};

EvalReport evaluate(std::span<const Category> gold, std::span<const std::optional<Category>> pred,
                    std::string run_id, Split split);

struct RunComparison {
  PerCategory per_category{};  // b - a
  Prf macro;
  Split split = Split::Test;
};

// Throws SplitMismatch.
RunComparison compare_runs(const EvalReport& a, const EvalReport& b);
Prf difference(const Prf& a, const Prf& b) noexcept;  // b - a

// JSON with keys matrix, per_category, macro, unparsed_count (plus run_id,
// split). Full precision; deterministic byte output.
std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(std::string_view json);

// Score table: Average row first, then one row per category, 3 decimals.
std::string report_to_csv(const EvalReport& r);
std::string confusion_to_csv(const ConfusionMatrix& m);
std::string confusion_to_svg(const ConfusionMatrix& m, std::string_view title = {});
std::string comparison_to_csv(const RunComparison& c);
std::string comparison_to_json(const RunComparison& c);

std::string format_fixed(double v, int decimals = 3);

}  // namespace scisent
