#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "scisent/backend.hpp"
#include "scisent/error.hpp"

namespace scisent {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path prefix without trailing slash
};

Endpoint split_endpoint(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw ConfigError("endpoint_url lacks a scheme: " + std::string(url));
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = std::string(url.substr(0, path_start));
  if (path_start != std::string_view::npos) ep.path = std::string(url.substr(path_start));
  while (!ep.path.empty() && ep.path.back() == '/') ep.path.pop_back();
  return ep;
}

class LimiterGuard {
 public:
  explicit LimiterGuard(ConcurrencyLimiter& l) : l_(l) { l_.acquire(); }
  ~LimiterGuard() { l_.release(); }
  LimiterGuard(const LimiterGuard&) = delete;
  LimiterGuard& operator=(const LimiterGuard&) = delete;

 private:
  ConcurrencyLimiter& l_;
};

}  // namespace

ChatCompletionBackend::ChatCompletionBackend(std::string api_key, std::size_t concurrency,
                                             BackoffPolicy backoff, Sleeper sleeper)
    : api_key_(std::move(api_key)),
      limiter_(concurrency),
      backoff_(backoff),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })) {}

std::unique_ptr<ChatCompletionBackend> ChatCompletionBackend::from_environment(
    std::size_t concurrency) {
  const char* key = std::getenv("SCISENT_API_KEY");
  if (key == nullptr || *key == '\0') throw AuthError("SCISENT_API_KEY is not set");
  return std::make_unique<ChatCompletionBackend>(key, concurrency);
}

std::string ChatCompletionBackend::build_request_body(const BackendConfig& config,
                                                      std::string_view prompt,
                                                      std::vector<std::string>* notes) {
  nlohmann::ordered_json body;
  body["model"] = config.model_id;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", std::string(prompt)}}});
  body["temperature"] = config.temperature;
  double top_p = config.top_p;
  if (config.clamp_top_p_min && top_p == 0.0) {
    top_p = 1e-9;
    if (notes) notes->push_back("top_p 0 clamped to 1e-9");
  }
  body["top_p"] = top_p;
  body["max_tokens"] = config.max_tokens;
  if (config.top_k) {
    if (config.top_k_supported) {
      body["top_k"] = *config.top_k;
    } else if (notes) {
      notes->push_back("top_k omitted: not supported by protocol");
    }
  }
  return body.dump();
}

std::string ChatCompletionBackend::parse_response_body(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("response is not a JSON object");
  auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw ProtocolError("response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object()) {
    throw ProtocolError("choices[0] has no message");
  }
  const auto& message = first["message"];
  auto content = message.find("content");
  if (content == message.end() || !content->is_string()) {
    throw ProtocolError("choices[0].message.content missing");
  }
  return content->get<std::string>();
}

GenerationResult ChatCompletionBackend::generate(const BackendConfig& config,
                                                 const GenerationRequest& request) {
  if (request.prompt.empty()) throw ConfigError("prompt must not be empty");
  GenerationResult result;
  result.model_id = config.model_id;
  result.request_fingerprint = request_fingerprint(config, request.prompt);
  const std::string body = build_request_body(config, request.prompt, &result.notes);
  const Endpoint ep = split_endpoint(config.endpoint_url);
  const std::string path = ep.path + "/chat/completions";

  const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto timeout_us =
      std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - timeout_s);

  LimiterGuard guard(limiter_);
  const auto started = std::chrono::steady_clock::now();
  std::string last_error;
  bool last_rate_limited = false;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) sleeper_(backoff_.delay(attempt - 1));

    httplib::Client client(ep.origin);
    client.set_connection_timeout(timeout_s.count(), timeout_us.count());
    client.set_read_timeout(timeout_s.count(), timeout_us.count());
    client.set_write_timeout(timeout_s.count(), timeout_us.count());
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(path, headers, body, "application/json");

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      last_rate_limited = false;
      continue;
    }
    const int status = res->status;
    if (status >= 200 && status < 300) {
      result.text = parse_response_body(res->body);
      result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      return result;
    }
    if (status == 401 || status == 403) {
      throw AuthError("HTTP " + std::to_string(status) + ": " + res->body);
    }
    if (status == 429) {
      last_error = "HTTP 429: " + res->body;
      last_rate_limited = true;
      continue;
    }
    if (status >= 500) {
      last_error = "HTTP " + std::to_string(status) + ": " + res->body;
      last_rate_limited = false;
      continue;
    }
    throw HttpError(status, res->body);
  }
  const std::string msg = last_error + " (after " + std::to_string(config.max_retries) + " retries)";
  if (last_rate_limited) throw RateLimited(msg);
  throw NetworkError(msg);
}

}  // namespace scisent
