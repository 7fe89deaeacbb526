#include "scisent/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "scisent/csv.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> kColumns = {"id",    "text",       "label",
                                                      "split", "provenance", "source_id"};

Provenance parse_provenance(std::string_view text) {
  const std::string norm = to_lower_ascii(trim(text));
  if (norm == "manual") return Provenance::Manual;
  if (norm == "synthetic") return Provenance::Synthetic;
  throw ConfigError("unknown provenance: " + std::string(text));
}

// Shared field-level checks for both input formats.
struct RawFields {
  std::optional<std::string> id, text, label, split, provenance, source_id;
};

SentenceRecord build_record(const RawFields& f, std::size_t line) {
  SentenceRecord r;
  if (!f.id || f.id->empty()) throw MalformedRecord(line, "missing id");
  if (!f.text || trim(*f.text).empty()) throw MalformedRecord(line, "missing text");
  if (!f.label) throw MalformedRecord(line, "missing label");
  if (!f.split) throw MalformedRecord(line, "missing split");
  r.id = *f.id;
  r.text = *f.text;
  if (auto c = try_parse_label(*f.label)) {
    r.label = *c;
  } else {
    throw MalformedRecord(line, "unknown label \"" + *f.label + "\"");
  }
  try {
    r.split = parse_split(*f.split);
    r.provenance = f.provenance ? parse_provenance(*f.provenance) : Provenance::Manual;
  } catch (const ConfigError& e) {
    throw MalformedRecord(line, e.what());
  }
  if (f.source_id && !f.source_id->empty()) r.source_id = *f.source_id;
  if (r.provenance == Provenance::Synthetic && !r.source_id) {
    throw MalformedRecord(line, "synthetic record without source_id");
  }
  if (r.provenance == Provenance::Manual && r.source_id) {
    throw MalformedRecord(line, "manual record with source_id");
  }
  return r;
}

std::optional<std::string> json_string_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw MalformedRecord(line, std::string("field ") + key + " is not a string");
  return it->get<std::string>();
}

void add_record(Dataset& d, std::unordered_set<std::string>& seen, SentenceRecord r,
                std::size_t line) {
  if (!seen.insert(r.id).second) throw MalformedRecord(line, "duplicate id \"" + r.id + "\"");
  d.records.push_back(std::move(r));
}

void parse_jsonl(std::string_view content, Dataset& d) {
  std::unordered_set<std::string> seen;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw MalformedRecord(line_no, "record is not a JSON object");
    RawFields f;
    f.id = json_string_field(obj, "id", line_no);
    f.text = json_string_field(obj, "text", line_no);
    f.label = json_string_field(obj, "label", line_no);
    f.split = json_string_field(obj, "split", line_no);
    f.provenance = json_string_field(obj, "provenance", line_no);
    f.source_id = json_string_field(obj, "source_id", line_no);
    add_record(d, seen, build_record(f, line_no), line_no);
  }
}

void parse_csv(std::string_view content, Dataset& d) {
  const auto rows = csv::parse(content);
  if (rows.empty()) return;
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    col[std::string(trim(rows[0].fields[i]))] = i;
  }
  for (auto required : {"id", "text", "label", "split"}) {
    if (!col.count(required)) {
      throw MalformedRecord(rows[0].line_number, std::string("header lacks column ") + required);
    }
  }
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](const char* name) -> std::optional<std::string> {
      auto it = col.find(name);
      if (it == col.end() || it->second >= row.fields.size()) return std::nullopt;
      return row.fields[it->second];
    };
    RawFields f{get("id"), get("text"), get("label"), get("split"), get("provenance"),
                get("source_id")};
    if (f.provenance && f.provenance->empty()) f.provenance.reset();
    add_record(d, seen, build_record(f, row.line_number), row.line_number);
  }
}

std::vector<SentenceRecord> sorted_by_id(const Dataset& d) {
  std::vector<SentenceRecord> out = d.records;
  std::sort(out.begin(), out.end(),
            [](const SentenceRecord& a, const SentenceRecord& b) { return a.id < b.id; });
  return out;
}

// Unbiased draw in [0, bound) from a 64-bit engine.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Validation:
      return "validation";
    case Split::Test:
      break;
  }
  return "test";
}

Split parse_split(std::string_view text) {
  const std::string norm = to_lower_ascii(trim(text));
  if (norm == "train") return Split::Train;
  if (norm == "validation" || norm == "val") return Split::Validation;
  if (norm == "test") return Split::Test;
  throw ConfigError("unknown split: " + std::string(text));
}

std::string_view provenance_name(Provenance p) noexcept {
  return p == Provenance::Manual ? "manual" : "synthetic";
}

std::vector<const SentenceRecord*> Dataset::in_split(Split s) const {
  std::vector<const SentenceRecord*> out;
  for (const auto& r : records) {
    if (r.split == s) out.push_back(&r);
  }
  std::sort(out.begin(), out.end(),
            [](const SentenceRecord* a, const SentenceRecord* b) { return a->id < b->id; });
  return out;
}

DatasetFormat format_for_path(std::string_view path) noexcept {
  const auto ext = to_lower_ascii(std::filesystem::path(path).extension().string());
  return ext == ".csv" ? DatasetFormat::Csv : DatasetFormat::JsonLines;
}

Dataset parse_dataset(std::string_view content, DatasetFormat format, std::string name) {
  Dataset d;
  d.name = std::move(name);
  if (format == DatasetFormat::Csv) {
    parse_csv(content, d);
  } else {
    parse_jsonl(content, d);
  }
  return d;
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
  return parse_dataset(read_file(path), format, std::filesystem::path(path).stem().string());
}

std::string serialize_dataset(const Dataset& d, DatasetFormat format) {
  std::string out;
  if (format == DatasetFormat::Csv) {
    out += csv::format_row({kColumns.begin(), kColumns.end()});
    for (const auto& r : sorted_by_id(d)) {
      out += csv::format_row({r.id, r.text, std::string(canonical_name(r.label)),
                              std::string(split_name(r.split)),
                              std::string(provenance_name(r.provenance)),
                              r.source_id.value_or("")});
    }
    return out;
  }
  for (const auto& r : sorted_by_id(d)) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["text"] = r.text;
    obj["label"] = canonical_name(r.label);
    obj["split"] = split_name(r.split);
    obj["provenance"] = provenance_name(r.provenance);
    obj["source_id"] = r.source_id ? nlohmann::ordered_json(*r.source_id) : nullptr;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

void save_dataset(const Dataset& d, const std::string& path, DatasetFormat format) {
  write_file_atomic(path, serialize_dataset(d, format));
}

ValidationProfile parse_profile(std::string_view text) {
  const std::string norm = to_lower_ascii(trim(text));
  if (norm == "base") return ValidationProfile::Base;
  if (norm == "augmented") return ValidationProfile::Augmented;
  if (norm == "none") return ValidationProfile::None;
  throw ConfigError("unknown validation profile: " + std::string(text));
}

std::vector<Violation> validate_dataset(const Dataset& d, ValidationProfile profile) {
  std::vector<Violation> out;
  std::unordered_map<std::string, const SentenceRecord*> by_id;
  for (const auto& r : d.records) {
    if (r.id.empty()) out.push_back({r.id, "empty id"});
    if (trim(r.text).empty()) out.push_back({r.id, "empty text"});
    if (!by_id.emplace(r.id, &r).second) out.push_back({r.id, "duplicate id"});
  }

  std::array<std::size_t, 3> split_counts{};
  std::array<std::size_t, kCategoryCount> category_counts{};
  std::size_t synthetic = 0;
  for (const auto& r : d.records) {
    ++split_counts[static_cast<std::size_t>(r.split)];
    ++category_counts[index_of(r.label)];
    if (r.provenance == Provenance::Manual) {
      if (r.source_id) out.push_back({r.id, "manual record carries a source_id"});
      continue;
    }
    ++synthetic;
    if (r.split == Split::Test) out.push_back({r.id, "synthetic record in test split"});
    if (!r.source_id) {
      out.push_back({r.id, "synthetic record without source_id"});
      continue;
    }
    auto it = by_id.find(*r.source_id);
    if (it == by_id.end()) {
      out.push_back({r.id, "source_id does not resolve: " + *r.source_id});
      continue;
    }
    const SentenceRecord& src = *it->second;
    if (src.provenance != Provenance::Manual) out.push_back({r.id, "source is not a manual record"});
    if (src.label != r.label) out.push_back({r.id, "label differs from source"});
    if (src.split != r.split) out.push_back({r.id, "split differs from source"});
  }

  auto expect = [&out](std::string what, std::size_t got, std::size_t want) {
    if (got != want) {
      out.push_back({"", what + ": expected " + std::to_string(want) + ", found " +
                             std::to_string(got)});
    }
  };
  switch (profile) {
    case ValidationProfile::Base:
      expect("total records", d.records.size(), 700);
      expect("synthetic records", synthetic, 0);
      for (Category c : all_categories()) {
        expect(std::string(canonical_name(c)) + " records", category_counts[index_of(c)], 100);
      }
      expect("train records", split_counts[0], 490);
      expect("validation records", split_counts[1], 70);
      expect("test records", split_counts[2], 140);
      break;
    case ValidationProfile::Augmented:
      expect("train records", split_counts[0], 2450);
      expect("validation records", split_counts[1], 350);
      expect("test records", split_counts[2], 140);
      break;
    case ValidationProfile::None:
      break;
  }
  return out;
}

std::array<std::size_t, 3> allocate_counts(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r = {ratios.train, ratios.validation, ratios.test};
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = r[i] * static_cast<double>(n);
    // 0.7 * 10 may land just below 7.
    const double floor_q = std::floor(quota + 1e-9);
    counts[i] = static_cast<std::size_t>(floor_q);
    remainder[i] = std::max(0.0, quota - floor_q);
    assigned += counts[i];
  }
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (remainder[i] > remainder[best] + 1e-12) best = i;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return counts;
}

Dataset stratified_split(const Dataset& d, const SplitRatios& ratios, std::uint64_t seed) {
  for (double r : {ratios.train, ratios.validation, ratios.test}) {
    if (!(r >= 0.0) || r > 1.0) throw InvalidRatios("split ratios must lie in [0, 1]");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw InvalidRatios("split ratios must sum to 1");
  }

  std::array<std::vector<std::size_t>, kCategoryCount> members;
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    members[index_of(d.records[i].label)].push_back(i);
  }

  Dataset out = d;
  for (Category c : all_categories()) {
    auto& idx = members[index_of(c)];
    if (idx.empty()) throw EmptyCategory("no records in category " + std::string(canonical_name(c)));
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return d.records[a].id < d.records[b].id;
    });
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xFFFFFFFFu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index_of(c))};
    std::mt19937_64 rng(seq);
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[bounded(rng, i)]);
    }
    const auto counts = allocate_counts(idx.size(), ratios);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Split s = k < counts[0]               ? Split::Train
                      : k < counts[0] + counts[1] ? Split::Validation
                                                  : Split::Test;
      out.records[idx[k]].split = s;
    }
  }
  return out;
}

}  // namespace scisent
