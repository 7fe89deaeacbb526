#include "scisent/metrics.hpp"

#include "scisent/error.hpp"

namespace scisent {
namespace {

double ratio(std::int64_t num, std::int64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::int64_t ConfusionMatrix::row_sum(std::size_t gold) const {
  std::int64_t s = 0;
  for (std::size_t c = 0; c < kCols; ++c) s += counts_[gold][c];
  return s;
}

std::int64_t ConfusionMatrix::column_sum(std::size_t col) const {
  std::int64_t s = 0;
  for (std::size_t g = 0; g < kRows; ++g) s += counts_[g][col];
  return s;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (std::size_t g = 0; g < kRows; ++g) s += row_sum(g);
  return s;
}

ConfusionMatrix confusion(std::span<const Category> gold,
                          std::span<const std::optional<Category>> pred) {
  if (gold.size() != pred.size()) {
    throw LengthMismatch("gold has " + std::to_string(gold.size()) + " items, predictions " +
                         std::to_string(pred.size()));
  }
  if (gold.empty()) throw ConfigError("cannot build a confusion matrix from no items");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::size_t col = pred[i] ? index_of(*pred[i]) : ConfusionMatrix::kUnparsedCol;
    ++m.at(index_of(gold[i]), col);
  }
  return m;
}

double harmonic_mean(double p, double r) noexcept {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

PerCategory per_category_prf(const ConfusionMatrix& m) {
  PerCategory out{};
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const std::int64_t diag = m.at(c, c);
    Prf& prf = out[c];
    prf.precision = ratio(diag, m.column_sum(c));
    prf.recall = ratio(diag, m.row_sum(c));
    prf.f1 = harmonic_mean(prf.precision, prf.recall);
  }
  return out;
}

Prf macro_average(const PerCategory& values) noexcept {
  Prf sum;
  for (const Prf& v : values) {
    sum.precision += v.precision;
    sum.recall += v.recall;
    sum.f1 += v.f1;
  }
  const double n = static_cast<double>(kCategoryCount);
  return {sum.precision / n, sum.recall / n, sum.f1 / n};
}

Prf macro_average(const std::map<Category, Prf>& values) {
  PerCategory arr{};
  for (Category c : all_categories()) {
    auto it = values.find(c);
    if (it == values.end()) {
      throw MissingCategory("no value for category " + std::string(canonical_name(c)));
    }
    arr[index_of(c)] = it->second;
  }
  return macro_average(arr);
}

EvalReport evaluate(std::span<const Category> gold, std::span<const std::optional<Category>> pred,
                    std::string run_id, Split split) {
  EvalReport r;
  r.matrix = confusion(gold, pred);
  r.per_category = per_category_prf(r.matrix);
  r.macro = macro_average(r.per_category);
  r.unparsed_count = r.matrix.column_sum(ConfusionMatrix::kUnparsedCol);
  r.run_id = std::move(run_id);
  r.split = split;
  return r;
}

Prf difference(const Prf& a, const Prf& b) noexcept {
  return {b.precision - a.precision, b.recall - a.recall, b.f1 - a.f1};
}

RunComparison compare_runs(const EvalReport& a, const EvalReport& b) {
  if (a.split != b.split) {
    throw SplitMismatch("cannot compare a " + std::string(split_name(a.split)) + " report with a " +
                        std::string(split_name(b.split)) + " report");
  }
  RunComparison out;
  out.split = a.split;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    out.per_category[c] = difference(a.per_category[c], b.per_category[c]);
  }
  out.macro = difference(a.macro, b.macro);
  return out;
}

}  // namespace scisent
