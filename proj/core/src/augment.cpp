#include "scisent/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "scisent/classify.hpp"
#include "scisent/csv.hpp"
#include "scisent/error.hpp"
#include "scisent/levenshtein.hpp"
#include "scisent/metrics.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

std::vector<std::string> others(const std::vector<std::string>& set, std::size_t skip) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i != skip) out.push_back(set[i]);
  }
  return out;
}

// Index of the variant that fails the gate against the rest of the set by the
// widest margin, or nullopt when the whole set passes.
std::optional<std::size_t> worst_in_set(std::string_view original,
                                        const std::vector<std::string>& set,
                                        const AugmentationPolicy& policy) {
  std::optional<std::size_t> worst;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto rest = others(set, i);
    const GateResult g = gate_variant(original, set[i], rest, policy);
    if (g.passed) continue;
    double margin = g.to_original - policy.min_distance;
    if (g.sibling_mean) margin = std::min(margin, *g.sibling_mean - policy.min_distance);
    if (margin < worst_margin) {
      worst_margin = margin;
      worst = i;
    }
  }
  return worst;
}

std::vector<Variant> measure(std::string_view original, const std::vector<std::string>& set) {
  std::vector<Variant> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    Variant v;
    v.text = set[i];
    v.to_original = normalized_levenshtein(original, set[i]);
    if (set.size() > 1) {
      double sum = 0.0;
      for (std::size_t j = 0; j < set.size(); ++j) {
        if (j != i) sum += normalized_levenshtein(set[i], set[j]);
      }
      v.mean_to_siblings = sum / static_cast<double>(set.size() - 1);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// "s12#v3" -> 3
std::optional<std::size_t> variant_number(std::string_view id) {
  const auto pos = id.rfind("#v");
  if (pos == std::string_view::npos || pos + 2 >= id.size()) return std::nullopt;
  std::size_t n = 0;
  for (char c : id.substr(pos + 2)) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

}  // namespace

void AugmentationPolicy::validate() const {
  if (variants_per_sentence <= 0) throw ConfigError("variants_per_sentence must be positive");
  if (!(min_distance > 0.0 && min_distance < 1.0)) throw ConfigError("min_distance must lie in (0, 1)");
  if (max_regeneration_attempts <= 0) throw ConfigError("max_regeneration_attempts must be positive");
  if (generation_template.find(kSentencePlaceholder) == std::string::npos) {
    throw TemplateError("generation template lacks {{SENTENCE}}");
  }
  if (generation_template.find(kCategoryPlaceholder) == std::string::npos) {
    throw TemplateError("generation template lacks {{CATEGORY}}");
  }
}

std::string load_generation_template(const std::string& path) {
  std::string tmpl = read_file(path);
  if (tmpl.find(kSentencePlaceholder) == std::string::npos ||
      tmpl.find(kCategoryPlaceholder) == std::string::npos) {
    throw TemplateError(path + ": generation template needs {{SENTENCE}} and {{CATEGORY}}");
  }
  return tmpl;
}

std::string render_generation_prompt(std::string_view tmpl, const SentenceRecord& record) {
  // Category first: the sentence text may itself contain "{{CATEGORY}}".
  const std::string with_category = replace_all(tmpl, kCategoryPlaceholder, canonical_name(record.label));
  return replace_all(with_category, kSentencePlaceholder, record.text);
}

std::string GateResult::reason() const {
  if (passed) return "pass";
  if (failed == GateCheck::ToOriginal) {
    return "distance to original " + format_fixed(to_original, 4) + " <= threshold";
  }
  return "mean distance to siblings " + format_fixed(sibling_mean.value_or(0.0), 4) + " <= threshold";
}

GateResult gate_variant(std::string_view original, std::string_view candidate,
                        std::span<const std::string> siblings, const AugmentationPolicy& policy) {
  GateResult g;
  g.to_original = normalized_levenshtein(original, candidate);
  if (!siblings.empty()) {
    double sum = 0.0;
    for (const auto& s : siblings) sum += normalized_levenshtein(candidate, s);
    g.sibling_mean = sum / static_cast<double>(siblings.size());
  }
  if (!(g.to_original > policy.min_distance)) {
    g.failed = GateCheck::ToOriginal;
  } else if (g.sibling_mean && !(*g.sibling_mean > policy.min_distance)) {
    g.failed = GateCheck::SiblingMean;
  }
  g.passed = !g.failed.has_value();
  return g;
}

VariantSet generate_variant_set(const SentenceRecord& record, Backend& backend,
                                const BackendConfig& config, const AugmentationPolicy& policy) {
  if (record.provenance != Provenance::Manual) {
    throw ConfigError("only manual records can be paraphrased: " + record.id);
  }
  VariantSet set;
  set.source_id = record.id;
  const std::string prompt = render_generation_prompt(policy.generation_template, record);
  const auto wanted = static_cast<std::size_t>(policy.variants_per_sentence);
  const int global_cap = policy.variants_per_sentence * policy.max_regeneration_attempts;

  std::vector<std::string> accepted;
  int slot_attempts = 0;
  while (accepted.size() < wanted) {
    if (slot_attempts >= policy.max_regeneration_attempts || set.attempts_used >= global_cap) break;
    const int attempt = set.attempts_used++;
    ++slot_attempts;

    std::string candidate;
    try {
      candidate = std::string(trim(backend.generate(config, {prompt, record.id, attempt}).text));
    } catch (const Error& e) {
      set.errors.push_back(e.what());
      continue;
    }
    if (candidate.empty()) continue;
    if (!gate_variant(record.text, candidate, accepted, policy).passed) continue;
    accepted.push_back(std::move(candidate));
    slot_attempts = 0;

    if (accepted.size() == wanted) {
      // The finished set is binding: a sibling mean can drop as later variants
      // arrive, so the worst offender is evicted and its slot reopened.
      if (auto worst = worst_in_set(record.text, accepted, policy)) {
        accepted.erase(accepted.begin() + static_cast<std::ptrdiff_t>(*worst));
      }
    }
  }

  if (accepted.size() == wanted) {
    set.status = VariantStatus::Complete;
  } else {
    set.status = VariantStatus::Exhausted;
    while (auto worst = worst_in_set(record.text, accepted, policy)) {
      accepted.erase(accepted.begin() + static_cast<std::ptrdiff_t>(*worst));
    }
  }
  set.variants = measure(record.text, accepted);
  return set;
}

std::string completion_report_to_json(const CompletionReport& r) {
  nlohmann::ordered_json j;
  j["sources"] = r.sources;
  j["complete"] = r.complete;
  j["exhausted"] = r.exhausted;
  j["exhausted_ids"] = r.exhausted_ids;
  j["new_records"] = {{"train", r.new_train}, {"validation", r.new_validation}};
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [attempts, n] : r.attempts_histogram) hist[std::to_string(attempts)] = n;
  j["attempts_histogram"] = hist;
  return j.dump(2) + "\n";
}

AugmentResult augment_dataset(const Dataset& d, Backend& backend, const BackendConfig& config,
                              const AugmentationPolicy& policy, const AugmentOptions& options) {
  policy.validate();
  if (options.precondition != ValidationProfile::None) {
    const auto violations = validate_dataset(d, options.precondition);
    if (!violations.empty()) {
      throw ConfigError("dataset fails the precondition profile: " + violations.front().message +
                        (violations.size() > 1 ? " (+" + std::to_string(violations.size() - 1) + " more)" : ""));
    }
  }

  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const auto& r = d.records[i];
    if (r.provenance == Provenance::Manual && r.split != Split::Test) sources.push_back(i);
  }

  std::vector<VariantSet> sets(sources.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= sources.size()) return;
      try {
        sets[k] = generate_variant_set(d.records[sources[k]], backend, config, policy);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(sources.size());
        return;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(
      1, std::min({options.concurrency, backend.max_concurrency(), sources.size()}));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  AugmentResult result;
  result.dataset.name = d.name.empty() ? std::string("augmented") : d.name + "_augmented";
  std::unordered_map<std::size_t, std::size_t> set_of;
  for (std::size_t k = 0; k < sources.size(); ++k) set_of[sources[k]] = k;

  CompletionReport& rep = result.report;
  rep.sources = sources.size();
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const SentenceRecord& src = d.records[i];
    result.dataset.records.push_back(src);
    auto it = set_of.find(i);
    if (it == set_of.end()) continue;
    const VariantSet& set = sets[it->second];
    for (std::size_t v = 0; v < set.variants.size(); ++v) {
      SentenceRecord syn;
      syn.id = src.id + "#v" + std::to_string(v + 1);
      syn.text = set.variants[v].text;
      syn.label = src.label;
      syn.split = src.split;
      syn.provenance = Provenance::Synthetic;
      syn.source_id = src.id;
      result.dataset.records.push_back(std::move(syn));
      (src.split == Split::Train ? rep.new_train : rep.new_validation)++;
    }
    if (set.status == VariantStatus::Complete) {
      ++rep.complete;
    } else {
      ++rep.exhausted;
      rep.exhausted_ids.push_back(src.id);
    }
    ++rep.attempts_histogram[set.attempts_used];
  }
  result.sets = std::move(sets);
  return result;
}

SimilarityReport similarity_report(const Dataset& d, double band_low, double band_high) {
  std::unordered_map<std::string, const SentenceRecord*> by_id;
  for (const auto& r : d.records) by_id.emplace(r.id, &r);

  // source id -> variants ordered by variant number (id order as fallback)
  std::map<std::string, std::vector<const SentenceRecord*>> groups;
  for (const auto& r : d.records) {
    if (r.provenance != Provenance::Synthetic) continue;
    if (!r.source_id || !by_id.count(*r.source_id)) throw DanglingSource(r.id);
    groups[*r.source_id].push_back(&r);
  }
  std::size_t slots = 0;
  for (auto& [src, vars] : groups) {
    std::sort(vars.begin(), vars.end(), [](const SentenceRecord* a, const SentenceRecord* b) {
      const auto na = variant_number(a->id);
      const auto nb = variant_number(b->id);
      if (na && nb && *na != *nb) return *na < *nb;
      return a->id < b->id;
    });
    slots = std::max(slots, vars.size());
  }

  struct Acc {
    double orig = 0.0, sib = 0.0;
    std::size_t n_orig = 0, n_sib = 0;
  };
  // [split][category or 7 for average][slot]
  std::array<std::array<std::vector<Acc>, kCategoryCount + 1>, 2> acc;
  for (auto& per_split : acc) {
    for (auto& v : per_split) v.assign(slots, Acc{});
  }

  for (const auto& [src_id, vars] : groups) {
    const SentenceRecord& src = *by_id.at(src_id);
    if (src.split == Split::Test) continue;
    const std::size_t s = src.split == Split::Train ? 0 : 1;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const double to_orig = normalized_levenshtein(src.text, vars[v]->text);
      std::optional<double> to_sib;
      if (vars.size() > 1) {
        double sum = 0.0;
        for (std::size_t w = 0; w < vars.size(); ++w) {
          if (w != v) sum += normalized_levenshtein(vars[v]->text, vars[w]->text);
        }
        to_sib = sum / static_cast<double>(vars.size() - 1);
      }
      for (std::size_t row : {index_of(vars[v]->label), kCategoryCount}) {
        Acc& a = acc[s][row][v];
        a.orig += to_orig;
        ++a.n_orig;
        if (to_sib) {
          a.sib += *to_sib;
          ++a.n_sib;
        }
      }
    }
  }

  SimilarityReport rep;
  rep.variant_slots = slots;
  rep.band_low = band_low;
  rep.band_high = band_high;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t row = 0; row <= kCategoryCount; ++row) {
      // Average row first, then categories in schema order.
      const std::size_t src_row = row == 0 ? kCategoryCount : row - 1;
      SimilarityRow out;
      out.split = s == 0 ? Split::Train : Split::Validation;
      if (row > 0) out.category = all_categories()[row - 1];
      for (std::size_t v = 0; v < slots; ++v) {
        const Acc& a = acc[s][src_row][v];
        SimilarityCell cell;
        cell.count = a.n_orig;
        cell.to_original = a.n_orig ? a.orig / static_cast<double>(a.n_orig) : nan;
        cell.to_siblings = a.n_sib ? a.sib / static_cast<double>(a.n_sib) : nan;
        for (double x : {cell.to_original, cell.to_siblings}) {
          if (!std::isnan(x) && (x < band_low || x > band_high)) rep.within_band = false;
        }
        out.per_variant.push_back(cell);
      }
      rep.rows.push_back(std::move(out));
    }
  }
  return rep;
}

std::string similarity_report_to_csv(const SimilarityReport& r) {
  std::vector<std::string> header = {"Data Type", "Category"};
  for (std::size_t v = 1; v <= r.variant_slots; ++v) {
    header.push_back("Syn" + std::to_string(v) + "-Original");
    header.push_back("Syn" + std::to_string(v) + "-Other Averaged");
  }
  std::string out = csv::format_row(header);
  auto cell = [](double x) { return std::isnan(x) ? std::string() : format_fixed(x, 3); };
  for (const auto& row : r.rows) {
    std::vector<std::string> fields = {row.split == Split::Train ? "Training" : "Validation",
                                       row.category ? std::string(canonical_name(*row.category)) : "Average"};
    for (const auto& c : row.per_variant) {
      fields.push_back(cell(c.to_original));
      fields.push_back(cell(c.to_siblings));
    }
    out += csv::format_row(fields);
  }
  return out;
}

}  // namespace scisent
