#include "scisent/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "scisent/csv.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

constexpr double kDegenerateEps = 1e-12;

}  // namespace

RatingMatrix::RatingMatrix(std::vector<std::string> items, std::size_t raters,
                           std::vector<std::vector<int>> counts)
    : items_(std::move(items)), raters_(raters), categories_(0), counts_(std::move(counts)) {
  if (raters_ < 2) throw InvalidRatingMatrix("need at least two raters");
  if (counts_.empty()) throw InvalidRatingMatrix("need at least one item");
  if (items_.size() != counts_.size()) throw InvalidRatingMatrix("item ids and count rows differ in length");
  categories_ = counts_.front().size();
  if (categories_ < 2) throw InvalidRatingMatrix("need at least two categories");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto& row = counts_[i];
    if (row.size() != categories_) {
      throw InvalidRatingMatrix("row " + items_[i] + " has " + std::to_string(row.size()) + " columns");
    }
    long sum = 0;
    for (int v : row) {
      if (v < 0) throw InvalidRatingMatrix("negative count in row " + items_[i]);
      sum += v;
    }
    if (sum != static_cast<long>(raters_)) {
      throw InvalidRatingMatrix("row " + items_[i] + " sums to " + std::to_string(sum) + ", expected " +
                                std::to_string(raters_));
    }
  }
}

RatingMatrix RatingMatrix::dichotomize(std::size_t column) const {
  if (column >= categories_) throw InvalidRatingMatrix("category column out of range");
  std::vector<std::vector<int>> two;
  two.reserve(counts_.size());
  for (const auto& row : counts_) {
    const int in = row[column];
    two.push_back({in, static_cast<int>(raters_) - in});
  }
  return RatingMatrix(items_, raters_, std::move(two));
}

double observed_agreement(const RatingMatrix& r) {
  const double n = static_cast<double>(r.raters());
  double total = 0.0;
  for (const auto& row : r.counts()) {
    double pairs = 0.0;
    for (int v : row) pairs += static_cast<double>(v) * (v - 1);
    total += pairs / (n * (n - 1.0));
  }
  return total / static_cast<double>(r.item_count());
}

double fleiss_kappa(const RatingMatrix& r) {
  const double p_bar = observed_agreement(r);
  const double denom = static_cast<double>(r.item_count()) * static_cast<double>(r.raters());
  double p_e = 0.0;
  for (std::size_t q = 0; q < r.category_count(); ++q) {
    long col = 0;
    for (const auto& row : r.counts()) col += row[q];
    const double p_q = static_cast<double>(col) / denom;
    p_e += p_q * p_q;
  }
  if (std::abs(1.0 - p_e) < kDegenerateEps) {
    throw DegenerateMarginals("every rating falls in one category; kappa is undefined");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double gwet_ac1_overall(const RatingMatrix& r) {
  const double p_a = observed_agreement(r);
  const double n = static_cast<double>(r.raters());
  const double items = static_cast<double>(r.item_count());
  const std::size_t k = r.category_count();
  double p_e = 0.0;
  for (std::size_t q = 0; q < k; ++q) {
    double pi_q = 0.0;
    for (const auto& row : r.counts()) pi_q += static_cast<double>(row[q]) / n;
    pi_q /= items;
    p_e += pi_q * (1.0 - pi_q);
  }
  p_e /= static_cast<double>(k - 1);
  if (std::abs(1.0 - p_e) < kDegenerateEps) {
    throw DegenerateChance("chance agreement is 1; AC1 is undefined");
  }
  return (p_a - p_e) / (1.0 - p_e);
}

double gwet_ac1_per_category(const RatingMatrix& r, std::size_t column) {
  return gwet_ac1_overall(r.dichotomize(column));
}

double gwet_ac1_per_category(const RatingMatrix& r, Category c) {
  return gwet_ac1_per_category(r, index_of(c));
}

RatingMatrix parse_raw_ratings_csv(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw MalformedRecord(1, "empty ratings file");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) col[std::string(trim(rows[0].fields[i]))] = i;
  for (auto name : {"item_id", "rater_id", "label"}) {
    if (!col.count(name)) throw MalformedRecord(rows[0].line_number, std::string("header lacks ") + name);
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<int>> counts;
  std::unordered_map<std::string, std::vector<std::string>> raters_seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const std::size_t need = std::max({col["item_id"], col["rater_id"], col["label"]});
    if (f.size() <= need) throw MalformedRecord(rows[r].line_number, "too few columns");
    const std::string item(trim(f[col["item_id"]]));
    const std::string rater(trim(f[col["rater_id"]]));
    auto c = try_parse_label(f[col["label"]]);
    if (!c) throw MalformedRecord(rows[r].line_number, "unknown label \"" + f[col["label"]] + "\"");
    auto [it, fresh] = counts.try_emplace(item, std::vector<int>(kCategoryCount, 0));
    if (fresh) order.push_back(item);
    auto& seen = raters_seen[item];
    if (std::find(seen.begin(), seen.end(), rater) != seen.end()) {
      throw MalformedRecord(rows[r].line_number, "rater " + rater + " rated item " + item + " twice");
    }
    seen.push_back(rater);
    ++it->second[index_of(*c)];
  }
  if (order.empty()) throw MalformedRecord(1, "no ratings");
  const std::size_t n = raters_seen[order.front()].size();
  std::vector<std::vector<int>> matrix;
  for (const auto& item : order) {
    if (raters_seen[item].size() != n) {
      throw InvalidRatingMatrix("item " + item + " has " + std::to_string(raters_seen[item].size()) +
                                " ratings, expected " + std::to_string(n));
    }
    matrix.push_back(counts[item]);
  }
  return RatingMatrix(std::move(order), n, std::move(matrix));
}

RatingMatrix parse_count_matrix_csv(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw MalformedRecord(1, "empty count matrix");
  const auto& header = rows[0].fields;
  std::size_t item_col = header.size();
  std::vector<std::size_t> cat_col(kCategoryCount, header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = trim(header[i]);
    if (name == "item_id") {
      item_col = i;
    } else if (auto c = try_parse_label(name)) {
      cat_col[index_of(*c)] = i;
    } else {
      throw MalformedRecord(rows[0].line_number, "unknown column \"" + std::string(name) + "\"");
    }
  }
  if (item_col == header.size()) throw MalformedRecord(rows[0].line_number, "header lacks item_id");
  for (Category c : all_categories()) {
    if (cat_col[index_of(c)] == header.size()) {
      throw MalformedRecord(rows[0].line_number, "header lacks column " + std::string(canonical_name(c)));
    }
  }
  std::vector<std::string> items;
  std::vector<std::vector<int>> matrix;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != header.size()) throw MalformedRecord(rows[r].line_number, "column count mismatch");
    items.push_back(f[item_col]);
    std::vector<int> row(kCategoryCount);
    for (std::size_t q = 0; q < kCategoryCount; ++q) {
      try {
        std::size_t used = 0;
        const std::string cell(trim(f[cat_col[q]]));
        row[q] = std::stoi(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw MalformedRecord(rows[r].line_number, "non-integer count \"" + f[cat_col[q]] + "\"");
      }
    }
    matrix.push_back(std::move(row));
  }
  if (matrix.empty()) throw MalformedRecord(1, "no items");
  const int n = std::accumulate(matrix.front().begin(), matrix.front().end(), 0);
  return RatingMatrix(std::move(items), static_cast<std::size_t>(std::max(n, 0)), std::move(matrix));
}

RatingMatrix load_ratings(const std::string& path, bool raw_labels) {
  const std::string content = read_file(path);
  return raw_labels ? parse_raw_ratings_csv(content) : parse_count_matrix_csv(content);
}

AgreementReport agreement_report(const RatingMatrix& r) {
  AgreementReport a;
  a.items = r.item_count();
  a.raters = r.raters();
  a.fleiss_kappa = fleiss_kappa(r);
  a.ac1_overall = gwet_ac1_overall(r);
  for (std::size_t q = 0; q < r.category_count(); ++q) {
    a.ac1_per_category.push_back(gwet_ac1_per_category(r, q));
  }
  return a;
}

std::string agreement_report_to_json(const AgreementReport& a) {
  nlohmann::ordered_json j;
  j["items"] = a.items;
  j["raters"] = a.raters;
  j["fleiss_kappa"] = a.fleiss_kappa;
  j["gwet_ac1_overall"] = a.ac1_overall;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (std::size_t q = 0; q < a.ac1_per_category.size(); ++q) {
    const std::string name =
        q < kCategoryCount ? std::string(canonical_name(all_categories()[q])) : "column_" + std::to_string(q);
    per[name] = a.ac1_per_category[q];
  }
  j["gwet_ac1_per_category"] = per;
  return j.dump(2) + "\n";
}

}  // namespace scisent
