#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scisent {

// Decoding and transport settings for one model. Defaults are the greedy
// zero-shot settings: temperature 0, top_p 0, top_k 1.
struct BackendConfig {
  std::string endpoint_url = "https://api.openai.com/v1";
  std::string model_id;
  double temperature = 0.0;
  double top_p = 0.0;
  std::optional<int> top_k = 1;
  int max_tokens = 256;
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 3;
  // Replace top_p == 0 with 1e-9 on the wire for servers that reject zero.
  bool clamp_top_p_min = false;
  // The base chat-completion body has no top_k; only send it when the server
  // understands the field.
  bool top_k_supported = false;

  // Throws ConfigError when a value is out of range.
  void validate() const;
};

struct GenerationResult {
  std::string text;
  std::string model_id;
  std::string request_fingerprint;
  std::chrono::milliseconds latency{0};
  // Wire adjustments made for this request ("top_p clamped to 1e-9", ...).
  std::vector<std::string> notes;
};

struct GenerationRequest {
  std::string prompt;
  // Caller-side identity of the request (sentence id); lets fixtures be keyed
  // without hashing prompts.
  std::string key;
  // Zero-based attempt number for regeneration loops.
  int attempt = 0;
};

// Stable SHA-256 hex digest of (model_id, prompt, temperature, top_p, top_k,
// max_tokens).
std::string request_fingerprint(const BackendConfig& config, std::string_view prompt);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenerationResult generate(const BackendConfig& config,
                                    const GenerationRequest& request) = 0;
  // Upper bound on concurrent generate() calls this backend accepts.
  virtual std::size_t max_concurrency() const noexcept { return 1; }
};

// Deterministic exponential backoff: base * factor^retry, capped.
struct BackoffPolicy {
  std::chrono::milliseconds base{500};
  double factor = 2.0;
  std::chrono::milliseconds cap{30'000};

  std::chrono::milliseconds delay(int retry) const;
  std::vector<std::chrono::milliseconds> schedule(int max_retries) const;
};

// Counting semaphore with a runtime bound.
class ConcurrencyLimiter {
 public:
  explicit ConcurrencyLimiter(std::size_t bound);
  void acquire();
  void release();
  std::size_t bound() const noexcept { return bound_; }

 private:
  std::size_t bound_;
  std::size_t in_use_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

// Chat-completion client speaking POST {endpoint}/chat/completions with a
// single user message.
class ChatCompletionBackend : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  ChatCompletionBackend(std::string api_key, std::size_t concurrency = 4,
                        BackoffPolicy backoff = {}, Sleeper sleeper = {});

  // Reads SCISENT_API_KEY; throws AuthError when unset.
  static std::unique_ptr<ChatCompletionBackend> from_environment(std::size_t concurrency = 4);

  GenerationResult generate(const BackendConfig& config,
                            const GenerationRequest& request) override;
  std::size_t max_concurrency() const noexcept override { return limiter_.bound(); }

  // Request body as sent on the wire. Appends adjustment notes when given.
  static std::string build_request_body(const BackendConfig& config, std::string_view prompt,
                                        std::vector<std::string>* notes = nullptr);
  // Extracts choices[0].message.content; throws ProtocolError.
  static std::string parse_response_body(std::string_view body);

 private:
  std::string api_key_;
  ConcurrencyLimiter limiter_;
  BackoffPolicy backoff_;
  Sleeper sleeper_;
};

// Table-driven backend for tests and offline runs. A fixture is looked up by
// request fingerprint first, then by request key. A fixture holding several
// responses answers attempt i with entry min(i, size - 1).
class MockBackend : public Backend {
 public:
  using Table = std::map<std::string, std::vector<std::string>>;

  explicit MockBackend(Table table, bool strict = true, std::string default_response = {});
  MockBackend(MockBackend&& other) noexcept;

  // JSON object {key: "text" | ["text", ...]} or
  // {"strict": bool, "default": "text", "responses": {...}}. Throws IoError.
  static MockBackend from_json_file(const std::string& path);
  static MockBackend from_json(std::string_view content);

  GenerationResult generate(const BackendConfig& config,
                            const GenerationRequest& request) override;
  std::size_t max_concurrency() const noexcept override { return 64; }

  std::size_t calls() const;

 private:
  Table table_;
  bool strict_;
  std::string default_response_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace scisent
