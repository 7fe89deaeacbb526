#include "scisent/backend.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>
#include <openssl/evp.h>

#include "scisent/error.hpp"

namespace scisent {

void BackendConfig::validate() const {
  if (model_id.empty()) throw ConfigError("model_id must be set");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (!(top_p >= 0.0 && top_p <= 1.0)) throw ConfigError("top_p must lie in [0, 1]");
  if (top_k && *top_k <= 0) throw ConfigError("top_k must be positive");
  if (max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

std::string request_fingerprint(const BackendConfig& config, std::string_view prompt) {
  nlohmann::json key = nlohmann::json::array();
  key.push_back(config.model_id);
  key.push_back(std::string(prompt));
  key.push_back(config.temperature);
  key.push_back(config.top_p);
  key.push_back(config.top_k ? nlohmann::json(*config.top_k) : nlohmann::json(nullptr));
  key.push_back(config.max_tokens);
  const std::string canonical = key.dump();

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::chrono::milliseconds BackoffPolicy::delay(int retry) const {
  const double ms = static_cast<double>(base.count()) * std::pow(factor, std::max(retry, 0));
  const double capped = std::min(ms, static_cast<double>(cap.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

std::vector<std::chrono::milliseconds> BackoffPolicy::schedule(int max_retries) const {
  std::vector<std::chrono::milliseconds> out;
  for (int i = 0; i < max_retries; ++i) out.push_back(delay(i));
  return out;
}

ConcurrencyLimiter::ConcurrencyLimiter(std::size_t bound) : bound_(std::max<std::size_t>(bound, 1)) {}

void ConcurrencyLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return in_use_ < bound_; });
  ++in_use_;
}

void ConcurrencyLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  cv_.notify_one();
}

}  // namespace scisent
