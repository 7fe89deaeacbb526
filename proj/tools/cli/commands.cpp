#include "cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <set>
#include <unordered_map>
#include <sstream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "scisent/agreement.hpp"
#include "scisent/augment.hpp"
#include "scisent/classify.hpp"
#include "scisent/corpus.hpp"
#include "scisent/error.hpp"
#include "scisent/metrics.hpp"
#include "scisent/text.hpp"

namespace scisent::cli {
namespace {

namespace fs = std::filesystem;

class IdMismatch : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::string config_path;
  std::string mock_path;
  std::size_t concurrency = 0;  // 0: take the config value
  bool frozen_clock = false;
};

// Decoding/backend overrides shared by classify and augment.
struct BackendFlags {
  std::string model;
  std::string endpoint;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> top_k;
  std::optional<int> max_tokens;
  std::optional<int> max_retries;
  std::optional<double> timeout_seconds;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", model, "Model identifier");
    cmd->add_option("--endpoint", endpoint, "Chat-completion base URL");
    cmd->add_option("--temperature", temperature);
    cmd->add_option("--top-p", top_p);
    cmd->add_option("--top-k", top_k);
    cmd->add_option("--max-tokens", max_tokens);
    cmd->add_option("--max-retries", max_retries);
    cmd->add_option("--timeout", timeout_seconds, "Request timeout in seconds");
  }

  void apply(BackendConfig& c) const {
    if (!model.empty()) c.model_id = model;
    if (!endpoint.empty()) c.endpoint_url = endpoint;
    if (temperature) c.temperature = *temperature;
    if (top_p) c.top_p = *top_p;
    if (top_k) c.top_k = *top_k;
    if (max_tokens) c.max_tokens = *max_tokens;
    if (max_retries) c.max_retries = *max_retries;
    if (timeout_seconds) c.timeout = std::chrono::milliseconds(static_cast<long long>(*timeout_seconds * 1000));
  }
};

CliConfig resolve_config(const GlobalOptions& g) {
  CliConfig cfg = load_config(g.config_path);
  if (g.concurrency > 0) cfg.concurrency = g.concurrency;
  return cfg;
}

std::function<std::chrono::system_clock::time_point()> make_clock(const GlobalOptions& g) {
  if (g.frozen_clock) return [] { return std::chrono::system_clock::time_point{}; };
  return [] { return std::chrono::system_clock::now(); };
}

// Mock fixtures when --mock is given, otherwise the networked client.
std::unique_ptr<Backend> make_backend(const GlobalOptions& g, BackendConfig& config, std::size_t concurrency) {
  if (!g.mock_path.empty()) {
    if (config.model_id.empty()) config.model_id = "mock";
    return std::make_unique<MockBackend>(MockBackend::from_json_file(g.mock_path));
  }
  config.validate();
  return ChatCompletionBackend::from_environment(concurrency);
}

Dataset load_any(const std::string& path) { return load_dataset(path, format_for_path(path)); }

void write_text(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  write_file_atomic(path.string(), content);
}

std::vector<double> parse_number_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stod(std::string(trim(part))));
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + ": " + text);
    }
  }
  if (out.size() != expected) throw ConfigError(std::string(what) + " needs " + std::to_string(expected) + " values");
  return out;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& dataset_path, const std::string& profile, std::ostream& out) {
  const Dataset d = load_any(dataset_path);
  const auto violations = validate_dataset(d, parse_profile(profile));
  for (const auto& v : violations) {
    out << (v.record_id.empty() ? std::string("dataset") : v.record_id) << ": " << v.message << '\n';
  }
  if (violations.empty()) {
    out << d.name << ": " << d.records.size() << " records, valid (" << profile << ")\n";
    return kOk;
  }
  out << d.name << ": " << violations.size() << " violation(s) (" << profile << ")\n";
  return kFailure;
}

// ---------------------------------------------------------------- split

int cmd_split(const std::string& dataset_path, const std::string& out_path, const std::string& ratios_text,
              std::uint64_t seed, std::ostream& out) {
  const auto r = parse_number_list(ratios_text, 3, "ratios");
  const Dataset d = load_any(dataset_path);
  const Dataset s = stratified_split(d, {r[0], r[1], r[2]}, seed);
  save_dataset(s, out_path, format_for_path(out_path));
  std::array<std::size_t, 3> counts{};
  for (const auto& rec : s.records) ++counts[static_cast<std::size_t>(rec.split)];
  out << "split " << d.records.size() << " records (seed " << seed << "): train " << counts[0] << ", validation "
      << counts[1] << ", test " << counts[2] << " -> " << out_path << '\n';
  return kOk;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string dataset;
  std::string split = "test";
  std::string template_path;
  std::string out_dir = "run";
  std::string cache;
  std::string run_id;
  BackendFlags backend;
};

int cmd_classify(const GlobalOptions& g, const ClassifyArgs& a, std::ostream& out) {
  CliConfig cfg = resolve_config(g);
  a.backend.apply(cfg.backend);
  if (!a.template_path.empty()) cfg.template_path = a.template_path;

  const Split split = parse_split(a.split);
  const Dataset d = load_any(a.dataset);
  if (d.in_split(split).empty()) throw ConfigError("split " + a.split + " is empty in " + a.dataset);
  const PromptTemplate tmpl = load_template(cfg.template_path);

  auto backend = make_backend(g, cfg.backend, cfg.concurrency);
  cfg.backend.validate();

  const std::string cache_path = a.cache.empty() ? (fs::path(a.out_dir) / "cache.jsonl").string() : a.cache;
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + a.out_dir);
  if (fs::path(cache_path).has_parent_path()) fs::create_directories(fs::path(cache_path).parent_path(), ec);
  RunStore cache(cache_path);

  ClassifyOptions opts;
  opts.concurrency = cfg.concurrency;
  opts.clock = make_clock(g);
  if (!a.run_id.empty()) opts.run_id = a.run_id;

  ClassificationRun run = classify_split(d, split, tmpl, *backend, cfg.backend, cache, opts);
  run.metadata = cfg.echo();
  run.metadata["dataset_path"] = a.dataset;
  run.metadata["backend"] = g.mock_path.empty() ? "chat_completions" : "mock:" + g.mock_path;
  write_run(run, a.out_dir);

  out << "run " << run.run_id << ": " << run.predictions.size() << " predictions, " << run.parsed_count()
      << " parsed, " << run.unparsed_count() << " unparsed -> " << (fs::path(a.out_dir) / "manifest.json").string()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string run;
  std::string dataset;
  std::string out_dir;
  std::string split;
  bool svg = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  fs::path manifest(a.run);
  if (fs::is_directory(manifest)) manifest /= "manifest.json";
  const ClassificationRun run = read_run(manifest.string());
  const Dataset d = load_any(a.dataset);
  const Split split = a.split.empty() ? run.split : parse_split(a.split);

  const auto gold_records = d.in_split(split);
  std::unordered_map<std::string, const SentenceRecord*> gold_by_id;
  for (const auto* r : gold_records) gold_by_id.emplace(r->id, r);

  std::vector<Category> gold;
  std::vector<std::optional<Category>> pred;
  std::set<std::string> seen;
  for (const auto& p : run.predictions) {
    auto it = gold_by_id.find(p.sentence_id);
    if (it == gold_by_id.end()) {
      throw IdMismatch("prediction " + p.sentence_id + " has no gold record in the " +
                       std::string(split_name(split)) + " split of " + a.dataset);
    }
    if (!seen.insert(p.sentence_id).second) throw IdMismatch("duplicate prediction for " + p.sentence_id);
    gold.push_back(it->second->label);
    pred.push_back(p.predicted);
  }
  if (seen.size() != gold_records.size()) {
    throw IdMismatch("run covers " + std::to_string(seen.size()) + " of " + std::to_string(gold_records.size()) +
                     " sentences in the " + std::string(split_name(split)) + " split");
  }

  const EvalReport report = evaluate(gold, pred, run.run_id, split);
  const fs::path dir = a.out_dir.empty() ? manifest.parent_path() : fs::path(a.out_dir);
  write_text(dir / "report.json", report_to_json(report));
  write_text(dir / "report.csv", report_to_csv(report));
  write_text(dir / "confusion.csv", confusion_to_csv(report.matrix));
  if (a.svg) write_text(dir / "confusion.svg", confusion_to_svg(report.matrix, run.model_id));

  out << "macro P=" << format_fixed(report.macro.precision) << " R=" << format_fixed(report.macro.recall)
      << " F1=" << format_fixed(report.macro.f1) << " (unparsed " << report.unparsed_count << ") -> "
      << (dir / "report.json").string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- agree

int cmd_agree(const std::string& ratings, const std::string& format, const std::string& out_path,
              std::ostream& out) {
  bool raw = false;
  if (format == "raw") {
    raw = true;
  } else if (format == "counts") {
    raw = false;
  } else {
    const std::string content = read_file(ratings);
    const auto first = split_lines(content).front();
    raw = first.find("rater_id") != std::string_view::npos;
  }
  const RatingMatrix m = load_ratings(ratings, raw);
  const AgreementReport rep = agreement_report(m);
  if (!out_path.empty()) write_text(out_path, agreement_report_to_json(rep));
  out << "items " << rep.items << ", raters " << rep.raters << ": kappa " << format_fixed(rep.fleiss_kappa)
      << ", AC1 " << format_fixed(rep.ac1_overall) << '\n';
  for (std::size_t q = 0; q < rep.ac1_per_category.size() && q < kCategoryCount; ++q) {
    out << "  " << canonical_name(all_categories()[q]) << ": AC1 " << format_fixed(rep.ac1_per_category[q]) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string dataset;
  std::string out;
  std::string report;
  std::string template_path;
  std::string profile = "base";
  std::optional<int> variants;
  std::optional<double> min_distance;
  std::optional<int> max_attempts;
  BackendFlags backend;
};

int cmd_augment(const GlobalOptions& g, const AugmentArgs& a, std::ostream& out) {
  CliConfig cfg = resolve_config(g);
  cfg.backend.temperature = cfg.augment_temperature;
  cfg.backend.top_p = cfg.augment_top_p;
  a.backend.apply(cfg.backend);
  if (!a.template_path.empty()) cfg.augment_template_path = a.template_path;
  if (a.variants) cfg.policy.variants_per_sentence = *a.variants;
  if (a.min_distance) cfg.policy.min_distance = *a.min_distance;
  if (a.max_attempts) cfg.policy.max_regeneration_attempts = *a.max_attempts;

  const Dataset d = load_any(a.dataset);
  cfg.policy.generation_template = load_generation_template(cfg.augment_template_path);
  auto backend = make_backend(g, cfg.backend, cfg.concurrency);
  cfg.backend.validate();

  AugmentOptions opts;
  opts.precondition = parse_profile(a.profile);
  opts.concurrency = cfg.concurrency;
  const AugmentResult res = augment_dataset(d, *backend, cfg.backend, cfg.policy, opts);
  save_dataset(res.dataset, a.out, format_for_path(a.out));
  const std::string report_path = a.report.empty() ? a.out + ".report.json" : a.report;
  write_text(report_path, completion_report_to_json(res.report));

  out << "augmented " << res.report.sources << " sources: " << res.report.complete << " complete, "
      << res.report.exhausted << " exhausted; +" << res.report.new_train << " train, +" << res.report.new_validation
      << " validation -> " << a.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& out_prefix,
                std::ostream& out) {
  const EvalReport a = report_from_json(read_file(a_path));
  const EvalReport b = report_from_json(read_file(b_path));
  RunComparison cmp;
  try {
    cmp = compare_runs(a, b);
  } catch (const SplitMismatch& e) {
    throw IdMismatch(e.what());
  }
  const std::string table = comparison_to_csv(cmp);
  if (!out_prefix.empty()) {
    write_text(out_prefix + ".csv", table);
    write_text(out_prefix + ".json", comparison_to_json(cmp));
  }
  out << table;
  return kOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& dataset_path, const std::string& out_path, const std::string& band_text,
               std::ostream& out) {
  const auto band = parse_number_list(band_text, 2, "band");
  const Dataset d = load_any(dataset_path);
  const SimilarityReport rep = similarity_report(d, band[0], band[1]);
  const std::string table = similarity_report_to_csv(rep);
  if (!out_path.empty()) write_text(out_path, table);
  out << table;
  out << "conformance: " << (rep.within_band ? "within" : "OUTSIDE") << " band [" << format_fixed(band[0], 2) << ", "
      << format_fixed(band[1], 2) << "]\n";
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const AuthError*>(&e)) return kAuthError;
  if (dynamic_cast<const IdMismatch*>(&e)) return kIdMismatch;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const MalformedRecord*>(&e)) return kIoError;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const MissingFixture*>(&e)) return kConfigError;
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rhetorical-role sentence classification toolkit", "scisent"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Flat key = value TOML config file");
  app.add_option("--mock", g.mock_path, "JSON fixture table; replaces the network backend");
  app.add_option("--concurrency", g.concurrency, "Concurrent backend requests")->check(CLI::PositiveNumber);
  app.add_flag("--frozen-clock", g.frozen_clock, "Pin timestamps to the epoch for reproducible artifacts");

  std::function<int()> action;

  std::string v_dataset, v_profile = "none";
  auto* validate = app.add_subcommand("validate", "Check a dataset against a profile");
  validate->add_option("--dataset", v_dataset)->required();
  validate->add_option("--profile", v_profile, "base | augmented | none");
  validate->callback([&] { action = [&] { return cmd_validate(v_dataset, v_profile, out); }; });

  std::string s_dataset, s_out, s_ratios = "0.7,0.1,0.2";
  std::uint64_t s_seed = 0;
  auto* split = app.add_subcommand("split", "Assign stratified train/validation/test splits");
  split->add_option("--dataset", s_dataset)->required();
  split->add_option("--out", s_out)->required();
  split->add_option("--ratios", s_ratios, "train,validation,test");
  split->add_option("--seed", s_seed);
  split->callback([&] { action = [&] { return cmd_split(s_dataset, s_out, s_ratios, s_seed, out); }; });

  ClassifyArgs c;
  auto* classify = app.add_subcommand("classify", "Zero-shot classify one split");
  classify->add_option("--dataset", c.dataset)->required();
  classify->add_option("--split", c.split, "train | validation | test");
  classify->add_option("--template", c.template_path, "Prompt template file");
  classify->add_option("--out", c.out_dir, "Run output directory");
  classify->add_option("--cache", c.cache, "Response cache (JSON Lines)");
  classify->add_option("--run-id", c.run_id);
  c.backend.add_to(classify);
  classify->callback([&] { action = [&] { return cmd_classify(g, c, out); }; });

  EvalArgs e;
  auto* eval = app.add_subcommand("eval", "Score a run against gold labels");
  eval->add_option("--run", e.run, "Run manifest or run directory")->required();
  eval->add_option("--dataset", e.dataset)->required();
  eval->add_option("--out", e.out_dir, "Report directory (default: the run directory)");
  eval->add_option("--split", e.split, "Gold split (default: the run's split)");
  eval->add_flag("--svg", e.svg, "Also write confusion.svg");
  eval->callback([&] { action = [&] { return cmd_eval(e, out); }; });

  std::string a_ratings, a_format = "auto", a_out;
  auto* agree = app.add_subcommand("agree", "Inter-annotator agreement");
  agree->add_option("--ratings", a_ratings)->required();
  agree->add_option("--format", a_format, "raw | counts | auto");
  agree->add_option("--out", a_out, "JSON report path");
  agree->callback([&] { action = [&] { return cmd_agree(a_ratings, a_format, a_out, out); }; });

  AugmentArgs au;
  auto* augment = app.add_subcommand("augment", "Generate gated paraphrase variants");
  augment->add_option("--dataset", au.dataset)->required();
  augment->add_option("--out", au.out)->required();
  augment->add_option("--report", au.report, "Completion report path");
  augment->add_option("--template", au.template_path, "Generation prompt file");
  augment->add_option("--profile", au.profile, "Precondition profile: base | none");
  augment->add_option("--variants", au.variants);
  augment->add_option("--min-distance", au.min_distance);
  augment->add_option("--max-attempts", au.max_attempts);
  au.backend.add_to(augment);
  augment->callback([&] { action = [&] { return cmd_augment(g, au, out); }; });

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "Per-category and macro deltas (B - A)");
  compare->add_option("report_a", cmp_a)->required();
  compare->add_option("report_b", cmp_b)->required();
  compare->add_option("--out", cmp_out, "Output path prefix for .csv/.json");
  compare->callback([&] { action = [&] { return cmd_compare(cmp_a, cmp_b, cmp_out, out); }; });

  std::string r_dataset, r_out, r_band = "0.45,0.70";
  auto* report = app.add_subcommand("report", "Paraphrase distance table for an augmented dataset");
  report->add_option("--dataset", r_dataset)->required();
  report->add_option("--out", r_out, "CSV path");
  report->add_option("--band", r_band, "low,high conformance band");
  report->callback([&] { action = [&] { return cmd_report(r_dataset, r_out, r_band, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    return action ? action() : kConfigError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace scisent::cli
