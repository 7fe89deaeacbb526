#include "cli/config.hpp"

#include <cstdlib>
#include <filesystem>

#include "scisent/error.hpp"
#include "scisent/metrics.hpp"
#include "scisent/text.hpp"

namespace scisent::cli {
namespace {

std::string unquote(std::string_view v, std::size_t line) {
  const char q = v.front();
  if (v.size() < 2 || v.back() != q) throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
  std::string_view body = v.substr(1, v.size() - 2);
  if (q == '\'') return std::string(body);
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\' || i + 1 == body.size()) {
      out.push_back(body[i]);
      continue;
    }
    switch (body[++i]) {
      case 'n':
        out.push_back('\n');
        break;
      case 't':
        out.push_back('\t');
        break;
      case '"':
        out.push_back('"');
        break;
      case '\\':
        out.push_back('\\');
        break;
      default:
        throw ConfigError("config line " + std::to_string(line) + ": unsupported escape");
    }
  }
  return out;
}

// Drops a trailing "# comment" that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

double as_double(const TomlValue& v, const std::string& key) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<long long>(&v)) return static_cast<double>(*i);
  throw ConfigError("config key " + key + " must be a number");
}

long long as_int(const TomlValue& v, const std::string& key) {
  if (auto i = std::get_if<long long>(&v)) return *i;
  throw ConfigError("config key " + key + " must be an integer");
}

bool as_bool(const TomlValue& v, const std::string& key) {
  if (auto b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("config key " + key + " must be true or false");
}

std::string as_string(const TomlValue& v, const std::string& key) {
  if (auto s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("config key " + key + " must be a string");
}

std::string num(double v) { return format_fixed(v, 6); }

}  // namespace

std::map<std::string, TomlValue> parse_flat_toml(std::string_view text) {
  std::map<std::string, TomlValue> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = trim(strip_comment(lines[i]));
    if (line.empty()) continue;
    if (line.front() == '[') throw ConfigError("config line " + std::to_string(line_no) + ": tables are not supported");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);

    TomlValue parsed;
    if (value.front() == '"' || value.front() == '\'') {
      parsed = unquote(value, line_no);
    } else if (value == "true" || value == "false") {
      parsed = value == "true";
    } else if (value.front() == '[' || value.front() == '{') {
      throw ConfigError("config line " + std::to_string(line_no) + ": arrays and inline tables are not supported");
    } else {
      std::string cleaned;
      for (char c : value) {
        if (c != '_') cleaned.push_back(c);
      }
      const bool is_float = cleaned.find_first_of(".eE") != std::string::npos;
      try {
        std::size_t used = 0;
        if (is_float) {
          parsed = std::stod(cleaned, &used);
        } else {
          parsed = std::stoll(cleaned, &used);
        }
        if (used != cleaned.size()) throw std::invalid_argument(cleaned);
      } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value \"" + std::string(value) + "\"");
      }
    }
    if (!out.emplace(key, parsed).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }
  return out;
}

void CliConfig::apply(const std::map<std::string, TomlValue>& values) {
  for (const auto& [key, v] : values) {
    if (key == "endpoint_url") {
      backend.endpoint_url = as_string(v, key);
    } else if (key == "model_id") {
      backend.model_id = as_string(v, key);
    } else if (key == "temperature") {
      backend.temperature = as_double(v, key);
    } else if (key == "top_p") {
      backend.top_p = as_double(v, key);
    } else if (key == "top_k") {
      if (auto s = std::get_if<std::string>(&v)) {
        if (to_lower_ascii(*s) != "none") throw ConfigError("top_k must be an integer or \"none\"");
        backend.top_k.reset();
      } else {
        backend.top_k = static_cast<int>(as_int(v, key));
      }
    } else if (key == "max_tokens") {
      backend.max_tokens = static_cast<int>(as_int(v, key));
    } else if (key == "timeout_seconds") {
      backend.timeout = std::chrono::milliseconds(static_cast<long long>(as_double(v, key) * 1000.0));
    } else if (key == "max_retries") {
      backend.max_retries = static_cast<int>(as_int(v, key));
    } else if (key == "clamp_top_p_min") {
      backend.clamp_top_p_min = as_bool(v, key);
    } else if (key == "top_k_supported") {
      backend.top_k_supported = as_bool(v, key);
    } else if (key == "template") {
      template_path = as_string(v, key);
    } else if (key == "augment_template") {
      augment_template_path = as_string(v, key);
    } else if (key == "variants_per_sentence") {
      policy.variants_per_sentence = static_cast<int>(as_int(v, key));
    } else if (key == "min_distance") {
      policy.min_distance = as_double(v, key);
    } else if (key == "max_regeneration_attempts") {
      policy.max_regeneration_attempts = static_cast<int>(as_int(v, key));
    } else if (key == "augment_temperature") {
      augment_temperature = as_double(v, key);
    } else if (key == "augment_top_p") {
      augment_top_p = as_double(v, key);
    } else if (key == "concurrency") {
      const long long c = as_int(v, key);
      if (c <= 0) throw ConfigError("concurrency must be positive");
      concurrency = static_cast<std::size_t>(c);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

std::map<std::string, std::string> CliConfig::echo() const {
  return {
      {"endpoint_url", backend.endpoint_url},
      {"model_id", backend.model_id},
      {"temperature", num(backend.temperature)},
      {"top_p", num(backend.top_p)},
      {"top_k", backend.top_k ? std::to_string(*backend.top_k) : "none"},
      {"max_tokens", std::to_string(backend.max_tokens)},
      {"timeout_seconds", num(static_cast<double>(backend.timeout.count()) / 1000.0)},
      {"max_retries", std::to_string(backend.max_retries)},
      {"clamp_top_p_min", backend.clamp_top_p_min ? "true" : "false"},
      {"top_k_supported", backend.top_k_supported ? "true" : "false"},
      {"template", template_path},
      {"augment_template", augment_template_path},
      {"variants_per_sentence", std::to_string(policy.variants_per_sentence)},
      {"min_distance", num(policy.min_distance)},
      {"max_regeneration_attempts", std::to_string(policy.max_regeneration_attempts)},
      {"augment_temperature", num(augment_temperature)},
      {"augment_top_p", num(augment_top_p)},
      {"concurrency", std::to_string(concurrency)},
  };
}

std::string default_data_dir() {
  if (const char* env = std::getenv("SCISENT_DATA_DIR"); env && *env) return env;
  // Source tree when run from a build directory, else the installed copy.
  if (std::filesystem::exists(SCISENT_DEFAULT_DATA_DIR)) return SCISENT_DEFAULT_DATA_DIR;
  return SCISENT_INSTALLED_DATA_DIR;
}

CliConfig load_config(const std::string& path) {
  CliConfig cfg;
  cfg.template_path = (std::filesystem::path(default_data_dir()) / "zsl_prompt.txt").string();
  cfg.augment_template_path = (std::filesystem::path(default_data_dir()) / "augment_prompt.txt").string();
  if (!path.empty()) cfg.apply(parse_flat_toml(read_file(path)));
  // The environment outranks the file for the endpoint; flags outrank both.
  if (const char* base = std::getenv("SCISENT_API_BASE"); base && *base) cfg.backend.endpoint_url = base;
  return cfg;
}

}  // namespace scisent::cli
