#pragma once

// Experiment configuration: sectioned `key = value` text, environment
// overrides (MMRELAY_<SECTION>_<KEY>) and a canonical dump of the effective
// settings. Precedence: defaults < file < environment < command line.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmrelay/relay.hpp"
#include "mmrelay/sim.hpp"

namespace mmrelay {

class ConfigError : public std::runtime_error {
 public:
  /// line 0 means the value did not come from a file.
  ConfigError(std::string key, int line, const std::string& what);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<Policy> policies{Policy::DObs, Policy::RSS, Policy::CBF};
  Sweep sweep;
  /// 0 selects the number of available cores.
  int workers = 0;
};

/// Sets `section.key` from its textual value. Throws ConfigError for unknown
/// keys or malformed values.
void set_option(ExperimentConfig& cfg, std::string_view section, std::string_view key,
                std::string_view value, int line = 0);

/// Parses `[section]` / `key = value` text on top of `cfg`. `#` and `;` start
/// comments. The result is validated.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Applies every MMRELAY_<SECTION>_<KEY> variable found through `getenv`.
void apply_environment(ExperimentConfig& cfg,
                       const std::function<const char*(const char*)>& getenv);

/// Validates the scenario and rethrows failures as ConfigError.
void validate(const ExperimentConfig& cfg);

/// Canonical text that apply_config_text turns back into the same settings.
std::string effective_config(const ExperimentConfig& cfg);

/// "K=0,10,20" -> Sweep.
Sweep parse_sweep(std::string_view spec);
std::vector<Policy> parse_policy_list(std::string_view list);

}  // namespace mmrelay
