#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "scisent/augment.hpp"
#include "scisent/backend.hpp"

namespace scisent::cli {

using TomlValue = std::variant<std::string, long long, double, bool>;

// Flat `key = value` TOML: strings, integers, floats, booleans and comments.
// Tables and arrays are rejected. Throws ConfigError with the line number.
std::map<std::string, TomlValue> parse_flat_toml(std::string_view text);

struct CliConfig {
  BackendConfig backend;
  std::string template_path;
  std::string augment_template_path;
  AugmentationPolicy policy;
  double augment_temperature = 1.0;
  double augment_top_p = 1.0;
  std::size_t concurrency = 4;

  // Applies file values over the current ones; unknown keys are errors.
  void apply(const std::map<std::string, TomlValue>& values);

  // Every resolved setting as strings, for run manifests.
  std::map<std::string, std::string> echo() const;
};

// Defaults, then the config file (when given), then SCISENT_API_BASE.
// Flags are applied afterwards by the caller.
CliConfig load_config(const std::string& path);

std::string default_data_dir();

}  // namespace scisent::cli
