#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "scisent/classify.hpp"
#include "scisent/error.hpp"
#include "scisent/text.hpp"

namespace scisent {
namespace {

using ojson = nlohmann::ordered_json;

std::string cache_key(const std::string& model_id, const std::string& fingerprint) {
  return model_id + '\x1f' + fingerprint;
}

std::chrono::system_clock::time_point parse_utc(const std::string& s) {
  std::tm tm{};
  std::istringstream in(s);
  in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  if (in.fail()) throw MalformedRecord(0, "bad timestamp: " + s);
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

ojson config_to_json(const BackendConfig& c) {
  ojson j;
  j["endpoint_url"] = c.endpoint_url;
  j["model_id"] = c.model_id;
  j["temperature"] = c.temperature;
  j["top_p"] = c.top_p;
  j["top_k"] = c.top_k ? ojson(*c.top_k) : ojson(nullptr);
  j["max_tokens"] = c.max_tokens;
  j["timeout_ms"] = c.timeout.count();
  j["max_retries"] = c.max_retries;
  j["clamp_top_p_min"] = c.clamp_top_p_min;
  j["top_k_supported"] = c.top_k_supported;
  return j;
}

BackendConfig config_from_json(const ojson& j) {
  BackendConfig c;
  c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
  c.model_id = j.value("model_id", c.model_id);
  c.temperature = j.value("temperature", c.temperature);
  c.top_p = j.value("top_p", c.top_p);
  if (j.contains("top_k") && !j["top_k"].is_null()) {
    c.top_k = j["top_k"].get<int>();
  } else {
    c.top_k.reset();
  }
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", c.timeout.count()));
  c.max_retries = j.value("max_retries", c.max_retries);
  c.clamp_top_p_min = j.value("clamp_top_p_min", c.clamp_top_p_min);
  c.top_k_supported = j.value("top_k_supported", c.top_k_supported);
  return c;
}

}  // namespace

RunStore::RunStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a fresh cache
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      entries_.emplace(cache_key(j.at("model_id").get<std::string>(),
                                 j.at("request_fingerprint").get<std::string>()),
                       j.at("raw_response").get<std::string>());
    } catch (const nlohmann::json::exception&) {
      // A torn final line from an interrupted run is dropped; the request is
      // simply issued again.
      continue;
    }
  }
}

std::optional<std::string> RunStore::find(const std::string& model_id,
                                          const std::string& fingerprint) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(cache_key(model_id, fingerprint));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void RunStore::put(const std::string& model_id, const std::string& fingerprint,
                   const std::string& raw_response) {
  std::lock_guard lock(mu_);
  if (!entries_.emplace(cache_key(model_id, fingerprint), raw_response).second) return;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to cache: " + path_);
  ojson j;
  j["model_id"] = model_id;
  j["request_fingerprint"] = fingerprint;
  j["raw_response"] = raw_response;
  out << j.dump() << '\n';
  out.flush();
}

std::size_t RunStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string prediction_to_json(const Prediction& p) {
  ojson j;
  j["sentence_id"] = p.sentence_id;
  j["predicted"] = p.predicted ? ojson(canonical_name(*p.predicted)) : ojson(nullptr);
  j["raw_response"] = p.raw_response;
  j["parse_status"] = p.status == ParseStatus::Parsed ? "parsed" : "unparsed";
  j["request_fingerprint"] = p.request_fingerprint;
  j["diagnostics"] = p.diagnostics;
  return j.dump();
}

Prediction prediction_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  Prediction p;
  p.sentence_id = j.at("sentence_id").get<std::string>();
  if (!j.at("predicted").is_null()) p.predicted = parse_label(j["predicted"].get<std::string>());
  p.raw_response = j.value("raw_response", "");
  const std::string status = j.at("parse_status").get<std::string>();
  p.status = status == "parsed" ? ParseStatus::Parsed : ParseStatus::Unparsed;
  p.request_fingerprint = j.value("request_fingerprint", "");
  p.diagnostics = j.value("diagnostics", "");
  if (p.predicted.has_value() != (p.status == ParseStatus::Parsed)) {
    throw ProtocolError("prediction " + p.sentence_id + ": predicted/parse_status disagree");
  }
  return p;
}

void write_run(const ClassificationRun& run, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir);

  std::string lines;
  for (const auto& p : run.predictions) {
    lines += prediction_to_json(p);
    lines.push_back('\n');
  }
  write_file_atomic((fs::path(dir) / "predictions.jsonl").string(), lines);

  ojson m;
  m["run_id"] = run.run_id;
  m["model_id"] = run.model_id;
  m["dataset_name"] = run.dataset_name;
  m["split"] = split_name(run.split);
  m["started_at"] = format_utc(run.started_at);
  m["finished_at"] = format_utc(run.finished_at);
  m["config"] = config_to_json(run.config_snapshot);
  m["counts"] = {{"total", run.predictions.size()},
                 {"parsed", run.parsed_count()},
                 {"unparsed", run.unparsed_count()}};
  m["notes"] = run.notes;
  ojson meta = ojson::object();
  for (const auto& [k, v] : run.metadata) meta[k] = v;
  m["metadata"] = meta;
  m["predictions_file"] = "predictions.jsonl";
  write_file_atomic((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

ClassificationRun read_run(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  ojson m;
  try {
    m = ojson::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(0, "run manifest " + manifest_path + ": " + e.what());
  }
  ClassificationRun run;
  try {
    run.run_id = m.at("run_id").get<std::string>();
    run.model_id = m.at("model_id").get<std::string>();
    run.dataset_name = m.value("dataset_name", "");
    run.split = parse_split(m.at("split").get<std::string>());
    run.started_at = parse_utc(m.at("started_at").get<std::string>());
    run.finished_at = parse_utc(m.at("finished_at").get<std::string>());
    run.config_snapshot = config_from_json(m.at("config"));
    run.notes = m.value("notes", std::vector<std::string>{});
    if (m.contains("metadata")) {
      for (const auto& [k, v] : m["metadata"].items()) run.metadata[k] = v.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(0, "run manifest " + manifest_path + ": " + e.what());
  }
  const fs::path preds =
      fs::path(manifest_path).parent_path() / m.value("predictions_file", "predictions.jsonl");
  const std::string content = read_file(preds.string());
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      run.predictions.push_back(prediction_from_json(lines[i]));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(i + 1, e.what());
    } catch (const UnknownLabel& e) {
      throw MalformedRecord(i + 1, e.what());
    }
  }
  return run;
}

}  // namespace scisent
