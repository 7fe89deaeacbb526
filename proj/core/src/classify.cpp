#include "scisent/classify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <regex>
#include <set>
#include <thread>

#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

enum class Section { None, Objective, Categories, Procedure };

std::string join_trimmed_block(const std::vector<std::string_view>& lines) {
  std::size_t first = 0;
  std::size_t last = lines.size();
  while (first < last && trim(lines[first]).empty()) ++first;
  while (last > first && trim(lines[last - 1]).empty()) --last;
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back('\n');
    out.append(lines[i]);
  }
  return out;
}

std::string render_definitions(const PromptTemplate& tmpl) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.category_definitions.size(); ++i) {
    const auto& [c, text] = tmpl.category_definitions[i];
    if (i) out.push_back('\n');
    out.append(canonical_name(c));
    out.append(": ");
    out.append(text);
  }
  return out;
}

const std::array<std::regex, kCategoryCount>& whole_word_patterns() {
  static const std::array<std::regex, kCategoryCount> patterns = [] {
    std::array<std::regex, kCategoryCount> out;
    for (Category c : all_categories()) {
      std::string name(canonical_name(c));
      std::string pattern = "(^|[^A-Za-z0-9_])";
      for (char ch : name) pattern += ch == ' ' ? std::string("\\s+") : std::string(1, ch);
      pattern += "($|[^A-Za-z0-9_])";
      out[index_of(c)] = std::regex(pattern, std::regex::icase | std::regex::ECMAScript);
    }
    return out;
  }();
  return patterns;
}

// "category: <label>" with a case-insensitive keyword; returns the label part.
std::optional<std::string_view> category_line_label(std::string_view line) {
  line = trim(line);
  constexpr std::string_view kKeyword = "category";
  if (line.size() < kKeyword.size()) return std::nullopt;
  if (to_lower_ascii(line.substr(0, kKeyword.size())) != kKeyword) return std::nullopt;
  std::string_view rest = trim(line.substr(kKeyword.size()));
  if (rest.empty() || rest.front() != ':') return std::nullopt;
  return trim(rest.substr(1));
}

}  // namespace

void PromptTemplate::validate() const {
  if (trim(objective_text).empty()) throw TemplateError("template objective is empty");
  if (category_definitions.size() != kCategoryCount) {
    throw TemplateError("template must define all seven categories exactly once");
  }
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (category_definitions[i].first != all_categories()[i]) {
      throw TemplateError("template categories out of order at position " + std::to_string(i + 1));
    }
    if (trim(category_definitions[i].second).empty()) {
      throw TemplateError("empty definition for " +
                          std::string(canonical_name(category_definitions[i].first)));
    }
  }
  if (count_occurrences(procedure_text, kSentencePlaceholder) != 1) {
    throw TemplateError("procedure must contain {{SENTENCE}} exactly once");
  }
}

PromptTemplate parse_template(std::string_view content) {
  std::vector<std::string_view> objective, categories, procedure;
  Section section = Section::None;
  std::set<Section> seen;
  for (std::string_view line : split_lines(content)) {
    const std::string_view t = trim(line);
    if (t.starts_with("## ")) {
      const std::string header = to_lower_ascii(trim(t.substr(3)));
      if (header == "objective") {
        section = Section::Objective;
      } else if (header == "categories") {
        section = Section::Categories;
      } else if (header == "procedure") {
        section = Section::Procedure;
      } else {
        throw TemplateError("unknown template section: " + std::string(t));
      }
      if (!seen.insert(section).second) throw TemplateError("duplicate section: " + std::string(t));
      continue;
    }
    switch (section) {
      case Section::Objective:
        objective.push_back(line);
        break;
      case Section::Categories:
        categories.push_back(line);
        break;
      case Section::Procedure:
        procedure.push_back(line);
        break;
      case Section::None:
        if (!t.empty()) throw TemplateError("text before the first section header");
        break;
    }
  }
  if (seen.size() != 3) throw TemplateError("template needs OBJECTIVE, CATEGORIES and PROCEDURE");

  PromptTemplate tmpl;
  tmpl.objective_text = join_trimmed_block(objective);
  tmpl.procedure_text = join_trimmed_block(procedure);
  for (std::string_view line : categories) {
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) {
      throw TemplateError("category line lacks ':' -> " + std::string(t));
    }
    auto c = try_parse_label(t.substr(0, colon));
    if (!c) throw TemplateError("unknown category in template: " + std::string(t.substr(0, colon)));
    tmpl.category_definitions.emplace_back(*c, std::string(trim(t.substr(colon + 1))));
  }
  tmpl.validate();
  return tmpl;
}

PromptTemplate load_template(const std::string& path) { return parse_template(read_file(path)); }

std::string build_prompt(const PromptTemplate& tmpl, std::string_view sentence_text) {
  const auto pos = tmpl.procedure_text.find(kSentencePlaceholder);
  std::string out = tmpl.objective_text;
  out += "\n\n";
  out += render_definitions(tmpl);
  out += "\n\n";
  if (pos == std::string::npos) {
    out += tmpl.procedure_text;
    return out;
  }
  out.append(tmpl.procedure_text, 0, pos);
  out.append(sentence_text);
  out.append(tmpl.procedure_text, pos + kSentencePlaceholder.size());
  return out;
}

std::string_view parse_rule_name(ParseRule r) noexcept {
  switch (r) {
    case ParseRule::FormatLine:
      return "format_line";
    case ParseRule::Fallback:
      return "fallback";
    case ParseRule::None:
      break;
  }
  return "none";
}

ParseOutcome parse_response(std::string_view raw) {
  ParseOutcome out;
  std::vector<std::string> rejected;
  const auto lines = split_lines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto label = category_line_label(lines[i]);
    if (!label) continue;
    if (auto c = try_parse_label(*label)) {
      out.category = c;
      out.rule = ParseRule::FormatLine;
      out.diagnostic = "format_line: line " + std::to_string(i + 1);
      for (const auto& r : rejected) out.diagnostic += "; unknown label \"" + r + "\"";
      return out;
    }
    rejected.emplace_back(*label);
  }

  const std::string text(raw);
  std::vector<Category> hits;
  for (Category c : all_categories()) {
    if (std::regex_search(text, whole_word_patterns()[index_of(c)])) hits.push_back(c);
  }
  if (hits.size() == 1) {
    out.category = hits.front();
    out.rule = ParseRule::Fallback;
    out.diagnostic = "fallback: single category name \"" + std::string(canonical_name(hits.front())) +
                     "\" found";
    return out;
  }
  out.rule = ParseRule::None;
  if (hits.empty()) {
    out.diagnostic = "unparsed: no category found";
  } else {
    out.diagnostic = "unparsed: " + std::to_string(hits.size()) + " category names found";
  }
  for (const auto& r : rejected) out.diagnostic += "; unknown label \"" + r + "\"";
  return out;
}

std::size_t ClassificationRun::parsed_count() const {
  return static_cast<std::size_t>(std::count_if(
      predictions.begin(), predictions.end(),
      [](const Prediction& p) { return p.status == ParseStatus::Parsed; }));
}

std::size_t ClassificationRun::unparsed_count() const {
  return predictions.size() - parsed_count();
}

ClassificationRun classify_split(const Dataset& d, Split split, const PromptTemplate& tmpl,
                                 Backend& backend, const BackendConfig& config, RunStore& cache,
                                 const ClassifyOptions& options) {
  const auto sentences = d.in_split(split);
  if (sentences.empty()) {
    throw ConfigError("split " + std::string(split_name(split)) + " is empty in dataset " + d.name);
  }

  ClassificationRun run;
  run.model_id = config.model_id;
  run.config_snapshot = config;
  run.dataset_name = d.name;
  run.split = split;
  run.started_at = options.clock();
  run.predictions.resize(sentences.size());

  std::mutex notes_mu;
  std::set<std::string> notes;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= sentences.size() || abort.load()) return;
      const SentenceRecord& rec = *sentences[i];
      Prediction& p = run.predictions[i];
      p.sentence_id = rec.id;
      const std::string prompt = build_prompt(tmpl, rec.text);
      p.request_fingerprint = request_fingerprint(config, prompt);

      std::optional<std::string> raw = cache.find(config.model_id, p.request_fingerprint);
      std::string error;
      if (!raw) {
        try {
          GenerationResult res = backend.generate(config, {prompt, rec.id, 0});
          cache.put(config.model_id, p.request_fingerprint, res.text);
          raw = std::move(res.text);
          std::lock_guard lock(notes_mu);
          notes.insert(res.notes.begin(), res.notes.end());
        } catch (const AuthError&) {
          std::lock_guard lock(notes_mu);
          if (!fatal) fatal = std::current_exception();
          abort.store(true);
          return;
        } catch (const Error& e) {
          error = e.what();
        }
      }
      if (!raw) {
        p.status = ParseStatus::Unparsed;
        p.diagnostics = "backend error: " + error;
        continue;
      }
      p.raw_response = *raw;
      ParseOutcome outcome = parse_response(*raw);
      p.predicted = outcome.category;
      p.status = outcome.category ? ParseStatus::Parsed : ParseStatus::Unparsed;
      p.diagnostics = std::move(outcome.diagnostic);
    }
  };

  const std::size_t workers = std::max<std::size_t>(
      1, std::min({options.concurrency, backend.max_concurrency(), sentences.size()}));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);

  run.notes.assign(notes.begin(), notes.end());
  run.finished_at = options.clock();
  if (options.run_id) {
    run.run_id = *options.run_id;
  } else {
    std::string stamp = format_utc(run.started_at);
    stamp.erase(std::remove_if(stamp.begin(), stamp.end(),
                               [](char c) { return c == '-' || c == ':'; }),
                stamp.end());
    run.run_id = config.model_id + "-" + d.name + "-" + std::string(split_name(split)) + "-" + stamp;
  }
  return run;
}

}  // namespace scisent
